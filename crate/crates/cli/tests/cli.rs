use std::fs;
use std::process::{Command, Output};

use pebbling::lemke;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pebbling")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn number_of_six_cycle() {
    let o = run(&["number", "--family", "cycle:6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "8");
}

#[test]
fn five_cycle_is_not_greedily_solvable() {
    let o = run(&["solve", "--family", "cycle:5", "--dist", "0,0,3,2,0", "--root", "0", "--mode", "greedy"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "UNSOLVABLE (greedy)");
    let o = run(&["solve", "--family", "cycle:5", "--dist", "0,0,3,2,0", "--root", "0"]);
    let text = stdout(&o);
    assert!(text.starts_with("SOLVABLE"));
    assert!(text.contains("root 0:"));
}

#[test]
fn lemke_solve_output_is_feasible() {
    let o = run(&["lemke", "solve", "--q", "4", "--xs", "3,5,7,9"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("4 | sum"));
    let line = text.lines().find(|l| l.starts_with("I = ")).unwrap();
    let inner = line.trim_start_matches("I = {").trim_end_matches('}');
    let idx: Vec<usize> = inner.split(',').map(|s| s.parse().unwrap()).collect();
    let xs = [3, 5, 7, 9];
    assert!(lemke::verify(&xs, 4, &idx).is_ok());
    assert!(lemke::brute_force(&xs, 4).unwrap().is_some());
    let gcd_line = text.lines().find(|l| l.starts_with("gcd-sum = ")).unwrap();
    let g: u64 = gcd_line["gcd-sum = ".len()..].split_whitespace().next().unwrap().parse().unwrap();
    assert!(g <= 4);
}

#[test]
fn graph_and_distribution_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("c5.txt");
    fs::write(&g, "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n").unwrap();
    let d = dir.path().join("d.txt");
    fs::write(&d, "0 0 3 2 0\n").unwrap();
    let o = run(&["solve", "--graph", g.to_str().unwrap(), "--dist-file", d.to_str().unwrap(), "--root", "0"]);
    assert!(stdout(&o).starts_with("SOLVABLE"));
    let o = run(&["number", "--graph", g.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "5");
}

#[test]
fn family_formulas() {
    assert_eq!(stdout(&run(&["family", "cycle:7"])).trim(), "11");
    assert_eq!(stdout(&run(&["family", "lemke"])).trim(), "unknown");
    assert_eq!(stdout(&run(&["family", "grid:2", "--pbar", "3"])).trim(), "9");
}

#[test]
fn property_failures_exit_one() {
    let o = run(&["two-pebbling", "--family", "lemke"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("witness:"));
    let o = run(&["class0", "--family", "path:3"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["class0", "--family", "petersen"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["graham", "--g1", "cycle:3", "--g2", "cycle:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("f(G1xG2)=9"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["number", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--family", "cycle:5"]).status.code(), Some(2));
    assert_eq!(run(&["number"]).status.code(), Some(2));
    assert_eq!(run(&["solve", "--family", "cycle:5", "--dist", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_three_with_bounds() {
    let o = run(&["number", "--family", "petersen", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bounds: ["), "{err}");
}

#[test]
fn lattice_commands() {
    let o = run(&["lattice", "supernormal", "--n", "3", "--b", "2", "--s", "2"]);
    assert_eq!(stdout(&o).trim(), "gap=1/18");
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fam.txt");
    fs::write(&f, "0\n1\n2\n").unwrap();
    let o = run(&["lattice", "shadow", "--w", "3", "--b", "2", "--family-file", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("shadow=4 bound=4"));
    let o = run(&["lattice", "genlov", "--w", "2", "--b", "2", "--nmax", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("violations=0"));
}

#[test]
fn threshold_csv_is_reproducible_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut outs = Vec::new();
    for jobs in ["1", "4"] {
        let path = dir.path().join(format!("curve{jobs}.csv"));
        let o = run(&[
            "threshold", "--family", "complete", "--n", "16,64", "--trials", "300", "--seed", "7", "--jobs", jobs,
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).starts_with("exponent="));
        outs.push(fs::read_to_string(&path).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    assert!(outs[0].starts_with("n,t,trials,successes,phat,ci_lo,ci_hi\n"));
}
