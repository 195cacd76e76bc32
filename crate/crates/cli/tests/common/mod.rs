#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn profile(name: &str) -> PathBuf {
    root().join("profiles").join(name)
}

pub fn hardreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardreg")).args(args).env_remove("HARDREG_CAP").output().expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}
