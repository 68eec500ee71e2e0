#![no_main]

use defectbench::learners::Algorithm;
use defectbench::stats::MetricKind;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let _ = text.parse::<Algorithm>();
    let _ = text.parse::<MetricKind>();
});
