// Regenerates include/fil.h from the exported items. The checked-in header
// stays in place when generation fails, so a broken toolchain never leaves
// C users without one.

use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    match cbindgen::generate_with_config(&dir, config) {
        Ok(bindings) => {
            bindings.write_to_file(dir.join("include/fil.h"));
        }
        Err(e) => println!("cargo:warning=header not regenerated: {e}"),
    }
}
