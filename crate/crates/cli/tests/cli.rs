use std::collections::BTreeSet;
use std::process::{Command, Output};

use defcoh_cli::{run, Format, Params, Report, SCENARIOS};

fn defcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_defcoh")).args(args).output().expect("spawn defcoh")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn sridharan_matches_golden() {
    let o = defcoh(&["run", "sridharan", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let golden = include_str!("golden/sridharan.json");
    assert_eq!(stdout(&o), golden);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &["run", "chi-table", "--format", "json"][..],
        &["ep-fuzz", "--count", "25", "--seed", "7", "--format", "json"],
        &["run", "qweyl-infinitesimal", "--q", "zeta:4", "--format", "json"],
        &["cohomology", "--algebra", "qp", "--q", "zeta:2", "--bidegree", "2,0", "--format", "json"],
    ] {
        let (a, b) = (defcoh(args), defcoh(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn timings_only_on_request() {
    let plain = stdout(&defcoh(&["run", "chi-table", "--format", "json"]));
    let timed = stdout(&defcoh(&["run", "chi-table", "--format", "json", "--timings"]));
    assert!(!plain.contains("wall_ms"));
    assert!(timed.contains("wall_ms"));
}

#[test]
fn fail_exits_with_one() {
    // Degree 1 cannot hold x^a y^b * x dx, so the H^1 dimensions come out wrong.
    let o = defcoh(&["run", "qp-cohomology", "--window", "order=2,deg=1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["overall"], "FAIL");
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(defcoh(&["run", "no-such-scenario"]).status.code(), Some(2));
    assert_eq!(defcoh(&["run", "qweyl-center", "--q", "3/2"]).status.code(), Some(2));
    assert_eq!(defcoh(&["star", "--pairs", "(dx,x*dy)"]).status.code(), Some(2));
}

#[test]
fn window_verdicts_warn_but_pass() {
    let o = defcoh(&["run", "qweyl-h2", "--q", "zeta:2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NONE-AT-WINDOW"));
    assert!(stdout(&o).contains("NONE-AT-WINDOW"));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("defcoh-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chi.csv");
    let o = defcoh(&["run", "chi-table", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.lines().next().unwrap().contains("verdict"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn star_subcommand_reports_commutator() {
    let o = defcoh(&["star", "--pairs", "(dx,dy)", "--order", "4", "--check", "assoc", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[x,y] = (h)"), "{}", stdout(&o));
}

#[test]
fn every_anchor_is_documented() {
    let doc = include_str!("../../../docs/ANCHORS.md");
    let documented: BTreeSet<&str> = doc
        .lines()
        .filter_map(|l| l.strip_prefix("| `"))
        .filter_map(|l| l.split('`').next())
        .collect();
    let mut seen = BTreeSet::new();
    let mut reports: Vec<Report> = SCENARIOS.iter().map(|s| run(s, &Params::default()).unwrap()).collect();
    reports.push(
        defcoh_cli::commands::cohomology(&defcoh_cli::commands::CohomologyArgs {
            algebra: "poly".into(),
            q: None,
            hbar: None,
            arity: 1,
            bidegree: (0, 0),
            window: (2, 4),
        })
        .unwrap(),
    );
    reports.push(
        defcoh_cli::commands::star(&defcoh_cli::commands::StarArgs { pairs: "(dx,dy)".into(), order: 2, check_assoc: true, bound: (2, 2) })
            .unwrap(),
    );
    for r in &reports {
        for c in &r.checks {
            assert!(documented.contains(c.anchor.as_str()), "anchor {} of {} is not in docs/ANCHORS.md", c.anchor, c.id);
            seen.insert(c.anchor.clone());
        }
        // Output stays parseable in every format.
        serde_json::from_str::<serde_json::Value>(&r.render(Format::Json, false)).unwrap();
        assert!(!r.render(Format::Csv, false).is_empty());
    }
    assert!(seen.len() >= 20, "only {} anchors exercised", seen.len());
}
