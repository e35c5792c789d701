#![no_main]

use abrw::graph::parse_labels;
use abrw::NodeIndex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let nodes: NodeIndex = (0..8).map(|i| format!("n{i}")).collect();
    let _ = parse_labels(text, "fuzz", &nodes);
});
