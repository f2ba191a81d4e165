#![no_main]

use libfuzzer_sys::fuzz_target;
use wahlkit::config::{class_from_terms, parse_class_expr};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(terms) = parse_class_expr(text) {
        let n = terms.iter().map(|t| t.0).max().unwrap_or(0);
        if n <= 64 {
            let cls = class_from_terms(&terms, n).expect("indices within range");
            // the rendered class parses back to the same coefficients
            let back = parse_class_expr(&cls.to_string()).expect("rendered class parses");
            assert_eq!(class_from_terms(&back, n).unwrap(), cls);
        }
    }
});
