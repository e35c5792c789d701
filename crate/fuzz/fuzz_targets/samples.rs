#![no_main]

use abrw::graph::{parse_samples, write_samples};
use abrw::NodeIndex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let nodes: NodeIndex = (0..8).map(|i| format!("n{i}")).collect();
    if let Ok(samples) = parse_samples(text, "fuzz", &nodes) {
        let written = write_samples(&nodes, &samples);
        assert_eq!(parse_samples(&written, "fuzz", &nodes).expect("reparse"), samples);
    }
});
