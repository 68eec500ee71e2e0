#![no_main]

use defectbench::dataset::{clean_dataset, parse_csv_dataset};
use defectbench::CleaningPolicy;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(d) = parse_csv_dataset(text, "bug", "true") {
        assert_eq!(d.labels().len(), d.n_rows());
        let _ = clean_dataset(&d, &CleaningPolicy::default());
    }
});
