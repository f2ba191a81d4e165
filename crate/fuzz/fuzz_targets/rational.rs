#![no_main]

use libfuzzer_sys::fuzz_target;
use wahlkit::config::parse_rational;
use wahlkit::exact;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(text) {
        let rendered = exact::to_string(&r);
        assert!(!rendered.ends_with("/0"));
        assert_eq!(parse_rational(&rendered).unwrap(), r);
    }
});
