#![no_main]

use libfuzzer_sys::fuzz_target;
use rcpt_core::cli::parse_density;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rho) = parse_density(text) {
            let trace: f64 = (0..3).map(|i| rho[(i, i)].re).sum();
            assert!((trace - 1.0).abs() < 1e-9);
        }
    }
});
