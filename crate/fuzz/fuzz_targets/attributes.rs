#![no_main]

use abrw::graph::{parse_attributes, write_attributes};
use abrw::NodeIndex;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let nodes: NodeIndex = (0..8).map(|i| format!("n{i}")).collect();
    if let Ok(attrs) = parse_attributes(text, "fuzz", &nodes) {
        let written = write_attributes(&nodes, &attrs);
        assert_eq!(parse_attributes(&written, "fuzz", &nodes).expect("reparse"), attrs);
    }
});
