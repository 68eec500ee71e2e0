#![no_main]

use defectbench::stats::{parse_metric_matrix, MetricKind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(m) = parse_metric_matrix(text, MetricKind::Auc) {
        let again = parse_metric_matrix(&m.to_csv(), MetricKind::Auc).expect("round trip");
        assert_eq!(again, m);
    }
});
