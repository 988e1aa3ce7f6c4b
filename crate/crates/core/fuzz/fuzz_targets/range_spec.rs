#![no_main]

use libfuzzer_sys::fuzz_target;
use rcpt_core::cli::parse_range;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(r) = parse_range(text) {
            let v = r.values();
            assert_eq!(v.len(), r.count);
            assert!(v.iter().all(|x| x.is_finite()));
        }
    }
});
