use std::path::Path;
use std::process::{Command, Output};

use zeno_cli::{Command as Cmd, RunConfig};

fn zeno(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zeno"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn data_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(2)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn identical_configs_write_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# coarse grid\nkd.steps=31\nzeta.steps=17\nexec=parallel\n").unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        let o = zeno(&[
            "fig5a",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let seq = zeno(&["fig5a", "--config", cfg.to_str().unwrap(), "--set", "exec=sequential"]);
    let par_rows = data_rows(&read(&a));
    assert_eq!(data_rows(&String::from_utf8(seq.stdout).unwrap()), par_rows);
}

#[test]
fn serialized_config_replays_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = RunConfig::defaults(Cmd::ZenoScatter);
    cfg.set("scheme", "insensitive").unwrap();
    cfg.set("zeta", "2").unwrap();
    cfg.set("n.max", "1000").unwrap();
    let text = cfg.serialize();
    assert_eq!(RunConfig::parse(&text, "rt").unwrap(), cfg);

    let file = dir.path().join("replay.cfg");
    std::fs::write(&file, &text).unwrap();
    let direct = zeno(&[
        "zeno-scatter",
        "--set",
        "scheme=insensitive",
        "--set",
        "zeta=2",
        "--set",
        "n.max=1000",
    ]);
    let replay = zeno(&["zeno-scatter", "--config", file.to_str().unwrap()]);
    assert_eq!(code(&direct), 0);
    assert_eq!(direct.stdout, replay.stdout);
}

#[test]
fn fig6_has_twenty_rows_and_unit_insensitive_column() {
    let o = zeno(&["fig6"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("# command=fig6 format=csv"));
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "n,T_down_no_measurement,T_up_insensitive,T_up_sensitive"
    );
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 20);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1) as f64);
        assert!((r[1] - 1.0).abs() < 1e-10, "unmeasured flip is total");
        assert_eq!(r[2], 1.0);
        assert!(r[3] > 0.0 && r[3] < 1.0);
    }
}

#[test]
fn fig5a_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig5a.tsv");
    let o = zeno(&["fig5a", "--format", "tsv", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = read(&out);
    assert_eq!(text.lines().nth(1).unwrap(), "kD\tzeta\tT_up");
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(2)
        .map(|l| l.split('\t').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 40_000);
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[2])));
    // outer axis slowest
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[199][0], 0.0);
    assert!(rows[200][0] > 0.0);
}

#[test]
fn fig5b_columns() {
    let o = zeno(&["fig5b", "--set", "b1.steps=5", "--set", "kd.steps=4"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "B1,kD,T_up");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| (0.0..=1.0).contains(&r[2])));
}

#[test]
fn ideal_survival_rises_to_one() {
    let o = zeno(&["ideal"]);
    assert_eq!(code(&o), 0);
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    let ns: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    assert_eq!(ns, (0..11).map(|i| 2f64.powi(i)).collect::<Vec<_>>());
    let p: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert!(p.windows(2).all(|w| w[1] > w[0]), "{p:?}");
    assert!(*p.last().unwrap() > 0.997);
}

#[test]
fn scatter_and_abstract_run() {
    let o = zeno(&["scatter", "--set", "kb=0"]);
    assert_eq!(code(&o), 0);
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| (r[6] - 1.0).abs() < 1e-9));

    let o = zeno(&["abstract", "--set", "projector=e1", "--set", "n.steps=4"]);
    assert_eq!(code(&o), 0);
    assert_eq!(data_rows(&String::from_utf8(o.stdout).unwrap()).len(), 4);
}

#[test]
fn verify_commands_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("appendix.csv");
    let o = zeno(&["verify-appendix", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("0 failed"));
    assert!(read(&out).lines().skip(2).all(|l| l.ends_with(",pass")));

    let o = zeno(&["verify-all", "--set", "seed=7"]);
    assert_eq!(code(&o), 0);
    let summary = String::from_utf8(o.stderr).unwrap();
    assert!(summary.contains("passed, 0 failed"), "{summary}");
}

#[test]
fn exit_codes() {
    // validation: unknown key, bad value, steps < 2, degenerate zeta, bad flag
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kd.steps=10\n\nzetta=0.4\n").unwrap();
    let o = zeno(&["fig5a", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let msg = String::from_utf8(o.stderr).unwrap();
    assert!(msg.contains("bad.cfg:3") && msg.contains("zetta"), "{msg}");

    assert_eq!(code(&zeno(&["fig5a", "--set", "zeta.max=x"])), 1);
    assert_eq!(code(&zeno(&["fig5a", "--set", "kd.steps=1"])), 1);
    assert_eq!(code(&zeno(&["scatter", "--set", "zeta=0.5"])), 1);
    assert_eq!(code(&zeno(&["fig6", "--format", "xml"])), 1);
    assert_eq!(code(&zeno(&["nonsense"])), 1);

    // IO: missing config, unwritable output
    let missing = dir.path().join("missing.cfg");
    assert_eq!(code(&zeno(&["fig6", "--config", missing.to_str().unwrap()])), 3);
    let unwritable = dir.path().join("no/such/dir/out.csv");
    assert_eq!(code(&zeno(&["fig6", "--out", unwritable.to_str().unwrap()])), 3);

    assert_eq!(code(&zeno(&["--help"])), 0);
}
