use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use vnfab::designs::{wisp_reference, RomImage};

fn repo(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}

fn vnfab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vnfab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn ok(out: &Path, args: &[&str]) -> String {
    let o = vnfab(out, args);
    assert!(
        o.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout).unwrap()
}

/// CSV body without the manifest lines.
fn body(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn rows(path: &Path) -> Vec<Vec<String>> {
    body(path)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn summary_value(path: &Path, key: &str) -> f64 {
    rows(path)
        .into_iter()
        .find(|r| r[0] == key)
        .unwrap_or_else(|| panic!("{key} missing"))[1]
        .parse()
        .unwrap()
}

#[test]
fn missing_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = vnfab(
        dir.path(),
        &["--config", "/nonexistent/config.json", "interconnect"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Usage"));
    let o = vnfab(dir.path(), &["interconnect", "--mode", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vnfab(dir.path(), &["thermal", "--gate-conduction", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn explicit_default_config_matches_built_in() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    ok(a.path(), &["repeaters"]);
    let cfg = repo("configs/default.json");
    ok(b.path(), &["--config", cfg.to_str().unwrap(), "repeaters"]);
    let name = "repeaters_cmos_set1.csv";
    assert_eq!(body(&a.path().join(name)), body(&b.path().join(name)));
    let hash = |p: &Path| {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .find(|l| l.starts_with("# config_sha256"))
            .unwrap()
            .to_string()
    };
    assert_eq!(hash(&a.path().join(name)), hash(&b.path().join(name)));
}

#[test]
fn fabric_longest_wire_about_a_tenth_of_cmos() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["interconnect", "--mode", "skybridge", "--n", "1e7"],
    );
    ok(
        dir.path(),
        &["interconnect", "--mode", "cmos", "--n", "1e7"],
    );
    let sb = summary_value(
        &dir.path().join("interconnect_skybridge_summary.csv"),
        "longest_wire_length",
    );
    let cmos = summary_value(
        &dir.path().join("interconnect_cmos_set1_summary.csv"),
        "longest_wire_length",
    );
    let ratio = cmos / sb;
    assert!((5.0..=15.0).contains(&ratio), "ratio {ratio}");
    let dist = rows(&dir.path().join("interconnect_skybridge_distribution.csv"));
    assert_eq!(dist.len(), 4473);
}

#[test]
fn param_set_two_selects_its_rent_parameters() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "interconnect",
            "--mode",
            "cmos",
            "--param-set",
            "2",
            "--compare",
        ],
    );
    let s = dir.path().join("interconnect_cmos_set2_summary.csv");
    assert_eq!(summary_value(&s, "longest_wire"), 1841.0);
    let cmp = rows(&dir.path().join("interconnect_comparison.csv"));
    let sets: Vec<&str> = cmp.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(sets, ["cmos_set1", "cmos_set2", "skybridge"]);
    let o = vnfab(
        dir.path(),
        &["interconnect", "--mode", "skybridge", "--param-set", "2"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn repeater_report_has_totals_row() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["repeaters", "--mode", "skybridge"]);
    let r = rows(&dir.path().join("repeaters_skybridge.csv"));
    assert_eq!(r.len(), 4);
    let tiers: f64 = r[..3].iter().map(|x| x[6].parse::<f64>().unwrap()).sum();
    let total: f64 = r[3][6].parse().unwrap();
    assert_eq!(r[3][0], "total");
    assert!((tiers - total).abs() <= 1e-9 * total);
}

#[test]
fn one_junction_cools_the_top_transistor() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["thermal", "--gate-conduction", "0", "--hej", "1"],
    );
    let t = rows(&dir.path().join("thermal_transistors.csv"));
    assert_eq!(t.len(), 20);
    let top: f64 = t.last().unwrap()[5].parse().unwrap();
    assert!((340.0..=460.0).contains(&top), "top {top}");
    let nodes = rows(&dir.path().join("thermal_nodes.csv"));
    let absorbed: f64 = nodes.iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
    assert!(absorbed > 0.0);
}

#[test]
fn wisp_run_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let prog = repo("programs/fib.asm");
    let stdout = ok(dir.path(), &["wisp", "run", prog.to_str().unwrap()]);
    let text = fs::read_to_string(&prog).unwrap();
    let n = vnfab::designs::parse_program(&text).unwrap().len();
    let reference = wisp_reference(&RomImage::from_asm(&text).unwrap(), n).unwrap();
    for (i, r) in reference.regs.iter().enumerate() {
        assert!(stdout.contains(&format!("R{i} = {r:>2} ")), "{stdout}");
    }
    assert!(stdout.contains("matches reference interpreter"));
    let trace = rows(&dir.path().join("wisp_trace.csv"));
    assert_eq!(trace.len(), n + 4);
}

#[test]
fn wisp_assemble_prints_rom_image() {
    let dir = tempfile::tempdir().unwrap();
    let prog = repo("programs/arith.asm");
    let stdout = ok(dir.path(), &["wisp", "assemble", prog.to_str().unwrap()]);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 16);
    assert!(lines
        .iter()
        .all(|l| l.len() == 9 && l.chars().all(|c| c == '0' || c == '1')));
}

#[test]
fn simulate_xor_netlist() {
    let dir = tempfile::tempdir().unwrap();
    let net = repo("netlists/xor.net");
    let stim = repo("netlists/xor.stim");
    ok(
        dir.path(),
        &["simulate", net.to_str().unwrap(), stim.to_str().unwrap()],
    );
    let out: Vec<String> = rows(&dir.path().join("simulate_outputs.csv"))
        .into_iter()
        .map(|r| r[1].clone())
        .collect();
    assert_eq!(out, ["0", "1", "1", "0"]);
    let trace = body(&dir.path().join("simulate_trace.csv"));
    assert!(trace.starts_with("slot [-],net [-],value [0/1/Z]\n"));
}

#[test]
fn layout_summary_grid_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &[
            "layout",
            "--design",
            "cla8",
            "--sweep",
            "feature-size",
            "--values",
            "16,24,32",
        ],
    );
    let area = summary_value(&dir.path().join("layout_summary.csv"), "area");
    assert!((1.0..1.7).contains(&area), "area {area}");
    let grid: Vec<String> = body(&dir.path().join("layout_grid.txt"))
        .lines()
        .map(str::to_string)
        .collect();
    let w = summary_value(&dir.path().join("layout_summary.csv"), "footprint_width") as usize;
    assert!(grid.iter().all(|l| l.chars().count() == w));
    let sweep = rows(&dir.path().join("layout_sweep_feature_size.csv"));
    let areas: Vec<f64> = sweep.iter().map(|r| r[7].parse().unwrap()).collect();
    assert!(areas.windows(2).all(|p| p[0] <= p[1]));
    let o = vnfab(dir.path(), &["layout", "--design", "alu"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic_and_labelled() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let prog = repo("programs/swap.asm");
    let runs: [&[&str]; 4] = [
        &[
            "interconnect",
            "--mode",
            "skybridge",
            "--n",
            "1e6",
            "--compare",
        ],
        &["thermal", "--gate-conduction", "0.5", "--hdpp"],
        &["wisp", "run", prog.to_str().unwrap()],
        &[
            "layout",
            "--design",
            "multiplier",
            "--sweep",
            "aspect-ratio",
            "--values",
            "27,54",
        ],
    ];
    for args in runs {
        assert_eq!(ok(a.path(), args), ok(b.path(), args));
    }
    let mut files: Vec<_> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    files.sort();
    assert!(files.len() >= 10);
    for f in files {
        let (pa, pb) = (a.path().join(&f), b.path().join(&f));
        assert_eq!(body(&pa), body(&pb), "{f:?}");
        let text = fs::read_to_string(&pa).unwrap();
        assert!(text.starts_with("# tool: vnfab"));
        assert!(text.contains("# config_sha256: "));
        if pa.extension().is_some_and(|e| e == "csv") {
            let header = body(&pa).lines().next().unwrap().to_string();
            assert!(
                header.split(',').all(|c| c.contains('[')),
                "{f:?}: {header}"
            );
        }
    }
}

#[test]
fn accept_passes_on_a_clean_checkout() {
    let dir = tempfile::tempdir().unwrap();
    let stdout = ok(dir.path(), &["accept"]);
    assert_eq!(
        stdout.lines().filter(|l| l.starts_with("[PASS]")).count(),
        12,
        "{stdout}"
    );
    let table = rows(&dir.path().join("accept.csv"));
    assert_eq!(table.len(), 12);
}
