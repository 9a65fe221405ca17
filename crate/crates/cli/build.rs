use std::process::Command;

/// Stamp the binary with a git-describe-style build version so dataset
/// sidecars record exactly which tree produced them. Builds outside a git
/// checkout fall back to the bare package version.
fn main() {
    println!("cargo:rerun-if-changed=../../.git/HEAD");
    let describe = Command::new("git")
        .args(["describe", "--tags", "--always", "--dirty"])
        .output()
        .ok()
        .filter(|out| out.status.success())
        .and_then(|out| String::from_utf8(out.stdout).ok())
        .map(|text| text.trim().to_string())
        .filter(|text| !text.is_empty());
    let version = match describe {
        Some(stamp) => format!("v{}-{stamp}", env!("CARGO_PKG_VERSION")),
        None => format!("v{}", env!("CARGO_PKG_VERSION")),
    };
    println!("cargo:rustc-env=BIPHOTON_BUILD_VERSION={version}");
}
