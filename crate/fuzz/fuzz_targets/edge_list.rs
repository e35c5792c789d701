#![no_main]

use abrw::graph::{parse_edge_list, write_edge_list};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let flags = data.first().copied().unwrap_or(0);
    let (directed, weighted) = (flags & 1 == 1, flags & 2 == 2);
    if let Ok(parsed) = parse_edge_list(text, "fuzz", directed, weighted) {
        // whatever parses must survive a write/read cycle unchanged
        let written = write_edge_list(&parsed.graph);
        let again = parse_edge_list(&written, "fuzz", directed, weighted).expect("reparse");
        assert_eq!(again.graph, parsed.graph);
    }
});
