use std::path::{Path, PathBuf};
use std::process::Command as Process;

use negprob_cli::problem::{parse_problem, ParseOptions};
use negprob_cli::{run_text, Command, Flags, EXIT_INPUT, EXIT_NO_PROPER_JOINT, EXIT_OK};

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems")
}

fn problem(name: &str) -> String {
    std::fs::read_to_string(problems_dir().join(name)).unwrap()
}

fn binary(args: &[&str]) -> (i32, String, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_negprob"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn oracle_clean_on_every_bundled_problem() {
    let mut seen = 0;
    for entry in std::fs::read_dir(problems_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("prob") {
            continue;
        }
        let out = run_text(Command::Oracle, &std::fs::read_to_string(&path).unwrap(), &Flags::default());
        assert_eq!(out.exit_code, EXIT_OK, "{}:\n{}", path.display(), out.output);
        assert!(!out.output.contains("MISMATCH"));
        seen += 1;
    }
    assert!(seen >= 10, "corpus has {seen} problems");
}

#[test]
fn bundled_problems_round_trip() {
    for entry in std::fs::read_dir(problems_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().and_then(|e| e.to_str()) != Some("prob") {
            continue;
        }
        let p = parse_problem(&std::fs::read_to_string(&path).unwrap(), ParseOptions::default()).unwrap();
        assert_eq!(parse_problem(&p.to_string(), ParseOptions::default()).unwrap(), p);
    }
}

#[test]
fn check_exit_codes() {
    let out = run_text(Command::Check, &problem("canonical.prob"), &Flags::default());
    assert_eq!(out.exit_code, EXIT_NO_PROPER_JOINT);
    assert!(out.output.contains("no proper joint; SZ sum = -3/2 < -1"));

    let out = run_text(Command::Check, &problem("perfect.prob"), &Flags::default());
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output.starts_with("proper joint exists; SZ sum = 3"));
    assert!(out.output.contains("witness:"));

    let out = run_text(Command::Check, &problem("four.prob"), &Flags::default());
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output.starts_with("proper joint exists\n"));
}

#[test]
fn solve_reports_mass_and_upper_total() {
    let out = run_text(Command::Solve, &problem("canonical.prob"), &Flags::default());
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output.starts_with("minimal negative mass = 1/8; Σp* = 9/8\n"));
    assert!(out.output.contains("l1 norm: 5/4"));
    assert!(out.output.contains("minimal negative mass: published -1/8; computed 1/8"));
    assert!(out.output.contains("E(X): required 0, actual -1/4 VIOLATED"));

    let out = run_text(Command::Solve, &problem("extreme.prob"), &Flags::default());
    assert!(out.output.starts_with("minimal negative mass = 1/2; Σp* = 3/2\n"));
    assert!(!out.output.contains("published"));
}

#[test]
fn permuted_labels_change_nothing_computed() {
    let a = run_text(Command::Solve, &problem("canonical.prob"), &Flags::default());
    let b = run_text(Command::Solve, &problem("permuted.prob"), &Flags::default());
    assert_eq!(a.output.lines().next(), b.output.lines().next());
    let a = run_text(Command::Bounds, &problem("canonical.prob"), &Flags::default());
    let b = run_text(Command::Bounds, &problem("permuted.prob"), &Flags::default());
    assert_eq!(a.output.lines().next(), b.output.lines().next());
}

#[test]
fn bounds_with_budgets() {
    let out = run_text(Command::Bounds, &problem("canonical.prob"), &Flags::default());
    assert!(out.output.starts_with("-1/2 <= E(XYZ) <= 1/2\n"));
    assert!(out.output.contains("published -1/4 <= E(XYZ) <= 1/2"));

    let flags = Flags {
        budget: Some("1/2".into()),
        target: Some("X,Y,Z".into()),
        ..Flags::default()
    };
    let out = run_text(Command::Bounds, &problem("canonical.prob"), &flags);
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output.starts_with("-11/6 <= E(XYZ) <= 11/6\n"));
    assert!(!out.output.contains("published"));

    let flags = Flags {
        budget: Some("0.5".into()),
        ..Flags::default()
    };
    assert_eq!(run_text(Command::Bounds, &problem("canonical.prob"), &flags).exit_code, EXIT_INPUT);
    let flags = Flags {
        budget: Some("0.5".into()),
        decimal: true,
        ..Flags::default()
    };
    assert!(run_text(Command::Bounds, &problem("canonical.prob"), &flags)
        .output
        .starts_with("-11/6 <= E(XYZ) <= 11/6\n"));

    let flags = Flags {
        target: Some("A,B,C".into()),
        ..Flags::default()
    };
    let out = run_text(Command::Bounds, &problem("four.prob"), &flags);
    assert_eq!(out.exit_code, EXIT_OK, "{}", out.output);
}

#[test]
fn bayes_posterior_and_order() {
    let out = run_text(Command::Bayes, &problem("bayes.prob"), &Flags::default());
    assert_eq!(out.exit_code, EXIT_OK);
    assert!(out.output.contains("27/68") && out.output.contains("7/68"));
    assert!(out.output.contains("E(XYZ) = 0"));
    assert!(out.output.contains("total evidence k = 17/128"));

    let flags = Flags {
        order: Some("C,A,B".into()),
        ..Flags::default()
    };
    let reordered = run_text(Command::Bayes, &problem("bayes.prob"), &flags);
    let table = |s: &str| s.lines().skip_while(|l| *l != "posterior:").take(10).collect::<Vec<_>>().join("\n");
    assert_eq!(table(&reordered.output), table(&out.output));
    assert!(reordered.output.contains("update C on YZ eps -1/2"));

    let flags = Flags {
        order: Some("A,Q".into()),
        ..Flags::default()
    };
    let bad = run_text(Command::Bayes, &problem("bayes.prob"), &flags);
    assert_eq!(bad.exit_code, EXIT_INPUT);
    assert!(bad.output.contains("expert `Q`"));
}

#[test]
fn likelihood_table_file_matches_quadratic() {
    let table = problems_dir().join("likelihood.table");
    let flags = Flags {
        likelihood: Some(format!("table:{}", table.display())),
        json: true,
        ..Flags::default()
    };
    let quadratic = Flags {
        json: true,
        ..Flags::default()
    };
    let a = run_text(Command::Bayes, &problem("bayes.prob"), &flags);
    let b = run_text(Command::Bayes, &problem("bayes.prob"), &quadratic);
    assert_eq!(a.exit_code, EXIT_OK, "{}", a.output);
    let strip = |s: &str| s.lines().filter(|l| !l.contains("\"likelihood\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&a.output), strip(&b.output));

    let missing = Flags {
        likelihood: Some("table:/nonexistent/table".into()),
        ..Flags::default()
    };
    assert_eq!(run_text(Command::Bayes, &problem("bayes.prob"), &missing).exit_code, EXIT_INPUT);
}

#[test]
fn json_is_deterministic_and_exact() {
    for cmd in [Command::Check, Command::Solve, Command::Bounds, Command::Bayes, Command::Oracle] {
        let flags = Flags {
            json: true,
            ..Flags::default()
        };
        let a = run_text(cmd, &problem("bayes.prob"), &flags);
        let b = run_text(cmd, &problem("bayes.prob"), &flags);
        assert_eq!(a.output, b.output);
        let v: serde_json::Value = serde_json::from_str(&a.output).unwrap();
        assert!(v["command"].is_string());
    }
    let flags = Flags {
        json: true,
        ..Flags::default()
    };
    let out = run_text(Command::Solve, &problem("canonical.prob"), &flags);
    let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
    assert_eq!(v["negative_mass"]["exact"], "1/8");
    assert_eq!(v["upper_total"]["exact"], "9/8");
    assert_eq!(v["distribution"][0]["atom"], "+++");
}

#[test]
fn parse_errors_carry_positions() {
    let out = run_text(Command::Check, "var X\nvar Y\ncorr X W = 1/2\n", &Flags::default());
    assert_eq!(out.exit_code, EXIT_INPUT);
    assert_eq!(out.output, "error: line 3, column 8: unknown variable `W`\n");
    let out = run_text(Command::Check, "var X Y\ncorr X Y = 3/2\n", &Flags::default());
    assert!(out.output.contains("out of range"));
}

#[test]
fn binary_end_to_end() {
    let canonical = problems_dir().join("canonical.prob");
    let canonical = canonical.to_str().unwrap();
    let (code, stdout, _) = binary(&["check", canonical]);
    assert_eq!(code, 1);
    assert!(stdout.starts_with("no proper joint; SZ sum = -3/2 < -1"));

    let (code, stdout, _) = binary(&["bounds", canonical, "--target", "X,Y,Z", "--budget", "minimal", "--json"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"exact\": \"-1/2\""));

    let (code, _, stderr) = binary(&["solve", "/nonexistent.prob"]);
    assert_eq!(code, 2);
    assert!(stderr.starts_with("error:"));

    let (code, _, stderr) = binary(&["bounds", canonical, "--budget", "1/16"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("below"));

    let (code, stdout, _) = binary(&["oracle", problems_dir().join("bayes.prob").to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
}
