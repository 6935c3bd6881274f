//! Every documented command on every fixture, shared by the golden-file
//! test and the acceptance run.

use std::path::{Path, PathBuf};

use skewlat::cli::run;

pub const FIXTURES: [&str; 5] = ["l2", "rr2", "lr2", "m2", "f4r"];

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(name: &str) -> String {
    root().join(format!("{name}.skw")).to_string_lossy().into_owned()
}

/// `(golden name, arguments)` for every documented command.
pub fn cases() -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    for name in FIXTURES {
        let file = fixture(name);
        let f = file.as_str();
        let per_file: Vec<(&str, Vec<&str>)> = vec![
            ("check", vec!["check", f, "--identities", "S19,S20,S25"]),
            ("green", vec!["green", f]),
            ("order", vec!["order", f]),
            ("quotient-D", vec!["quotient", f, "--by", "D"]),
            ("quotient-L", vec!["quotient", f, "--by", "L"]),
            ("quotient-R", vec!["quotient", f, "--by", "R"]),
            ("quotient-comm", vec!["quotient", f, "--by", "commutativity"]),
            ("decompose-first", vec!["decompose", f, "--kind", "first"]),
            ("decompose-component", vec!["decompose", f, "--kind", "component"]),
            ("decompose-second", vec!["decompose", f, "--kind", "second"]),
            ("cosets", vec!["cosets", f]),
            ("categorical", vec!["categorical", f]),
            ("dot", vec!["dot", f]),
        ];
        for (cmd, args) in per_file {
            out.push((format!("{name}.{cmd}"), owned(&args)));
        }
    }
    let (rr2, lr2, f4r) = (fixture("rr2"), fixture("lr2"), fixture("f4r"));
    out.push(("iso-rr2-lr2".into(), owned(&["iso", &rr2, &lr2])));
    out.push(("iso-f4r-f4r".into(), owned(&["iso", &f4r, &f4r])));
    out.push(("cosets-pair".into(), owned(&["cosets", &f4r, "--pair", "2", "1"])));
    out.push(("enumerate-4".into(), owned(&["enumerate", "--size", "4"])));
    out.push(("enumerate-4-lattices".into(), owned(&["enumerate", "--size", "4", "--satisfy", "S1-S8"])));
    out.push((
        "find-noncategorical".into(),
        owned(&["find", "--size", "8", "--skeleton", "2>4>2", "--require", "noncategorical"]),
    ));
    out.push((
        "find-absent".into(),
        owned(&["find", "--size", "3", "--satisfy", "S1-S6,S15,S16", "--falsify", "S11"]),
    ));
    out
}

pub fn render(args: &[String], workers: &str) -> String {
    let mut argv = vec!["skewlat".to_string(), "--workers".into(), workers.into()];
    argv.extend(args.iter().cloned());
    let o = run(argv);
    format!("exit {}\n{}{}", o.code, o.stdout, o.stderr)
}

/// Names of cases whose output differs across runs or worker counts, or
/// from the stored golden file.
pub fn mismatches(update: bool) -> Vec<String> {
    let dir = root().join("golden");
    let mut bad = Vec::new();
    for (name, args) in cases() {
        let one = render(&args, "1");
        if one != render(&args, "1") || one != render(&args, "4") {
            bad.push(format!("{name} (unstable)"));
            continue;
        }
        let path = dir.join(format!("{name}.txt"));
        if update {
            std::fs::create_dir_all(&dir).unwrap();
            std::fs::write(&path, &one).unwrap();
        } else if std::fs::read_to_string(&path).ok().as_deref() != Some(one.as_str()) {
            bad.push(name);
        }
    }
    bad
}
