#![no_main]

use libfuzzer_sys::fuzz_target;
use wahlkit::config::ConfigFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(file) = text.parse::<ConfigFile>() else {
        return;
    };
    // whatever parses must serialize back to an identical file
    let again: ConfigFile = file.to_string().parse().expect("serialized config reparses");
    assert_eq!(file, again);
    if let Ok(cfg) = file.build() {
        let _ = wahlkit::geometry::validate(&cfg);
    }
});
