use std::env;

fn main() {
    println!("cargo:rerun-if-changed=src");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let crate_dir = env::var("CARGO_MANIFEST_DIR").unwrap();
    match cbindgen::generate(&crate_dir) {
        Ok(header) => {
            header.write_to_file("include/splitsync.h");
        }
        Err(cbindgen::Error::ParseSyntaxError { .. }) => {
            // incomplete source during an editor save; keep the old header
        }
        Err(err) => panic!("cbindgen failed: {err}"),
    }
}
