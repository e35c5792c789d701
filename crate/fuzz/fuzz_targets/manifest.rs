#![no_main]

use abrw_cli::{ConfigFile, RunManifest};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(manifest) = RunManifest::parse(text) {
        let written = manifest.to_toml().expect("serialize");
        RunManifest::parse(&written).expect("reparse");
    }
    let _ = ConfigFile::parse(text);
});
