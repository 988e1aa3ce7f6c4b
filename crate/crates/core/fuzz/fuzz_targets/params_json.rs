#![no_main]

use libfuzzer_sys::fuzz_target;
use rcpt_core::ModelParams;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = ModelParams::from_json_str(text, ModelParams::default()) {
            // anything accepted must survive a round trip
            let again = serde_json::to_string(&p).unwrap();
            assert_eq!(ModelParams::from_json_str(&again, ModelParams::default()).unwrap(), p);
        }
    }
});
