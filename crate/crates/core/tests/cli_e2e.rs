use std::process::{Command, Output};

use lacasse_core::cli::OutputRecord;
use lacasse_core::exact::{ipow00, ExactInt};

fn lacasse(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacasse"))
        .args(args)
        .output()
        .expect("run lacasse")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_records(o: &Output) -> Vec<OutputRecord> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).expect("one JSON object per line"))
        .collect()
}

fn csv_records(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,quantity,d,value,passed"));
    let body: String = lines.map(|l| format!("{l}\n")).collect();
    csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_owned).collect())
        .collect()
}

#[test]
fn value_examples() {
    let o = lacasse(&["value", "alpha", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "10\n");

    let o = lacasse(&["value", "q", "2"]);
    assert_eq!(stdout(&o), "3/2\n");

    let o = lacasse(&["value", "xi", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("xi(0)"));
}

#[test]
fn large_values_print_in_full() {
    let o = lacasse(&["value", "diff", "300"]);
    let expected = ipow00(&ExactInt::from(300), 301).to_string();
    assert_eq!(stdout(&o).trim(), expected);
    assert!(!stdout(&o).contains('e'));
}

#[test]
fn value_formats_agree() {
    for (q, n) in [("alpha", "7"), ("beta", "7"), ("q", "9"), ("xi", "5"), ("xi2", "5"), ("diff", "6")] {
        let plain = stdout(&lacasse(&["value", q, n])).trim().to_owned();
        let json = json_records(&lacasse(&["value", q, n, "--format", "json"]));
        let csv = csv_records(&lacasse(&["value", q, n, "--format", "csv"]));
        assert_eq!(json.len(), 1);
        assert_eq!(json[0].value, plain);
        assert_eq!(json[0].quantity, q);
        assert_eq!(csv[0][3], plain);
        assert!(json[0].exact_value().is_some());
    }
}

#[test]
fn verify_formats_agree() {
    let plain = stdout(&lacasse(&["verify", "--from", "1", "--to", "12"]));
    let json = json_records(&lacasse(&["verify", "--from", "1", "--to", "12", "--format", "json"]));
    let csv = csv_records(&lacasse(&["verify", "--from", "1", "--to", "12", "--format", "csv"]));

    let plain_lines: Vec<&str> = plain.lines().collect();
    assert_eq!(plain_lines.len(), 13);
    assert_eq!(plain_lines[12], "verified n = 1..=12: 12 passed, 0 failed");
    assert_eq!(json.len(), 36);
    assert_eq!(csv.len(), 36);

    for (i, line) in plain_lines[..12].iter().enumerate() {
        let field = |name: &str| -> String {
            line.split(' ')
                .find_map(|kv| kv.strip_prefix(&format!("{name}=")))
                .unwrap()
                .to_owned()
        };
        for (j, q) in ["alpha", "beta", "diff"].into_iter().enumerate() {
            let rec = &json[3 * i + j];
            assert_eq!(rec.n, i as u64 + 1);
            assert_eq!(rec.quantity, q);
            assert_eq!(rec.value, field(q));
            assert_eq!(rec.passed, Some(true));
            assert_eq!(rec.routes.as_ref().unwrap().join(","), field("routes"));
            assert_eq!(csv[3 * i + j], vec![rec.n.to_string(), q.to_owned(), String::new(), rec.value.clone(), "true".into()]);
        }
    }
}

#[test]
fn verify_output_independent_of_jobs() {
    let args = ["verify", "--from", "1", "--to", "40", "--routes", "closed,brute,series"];
    for format in ["plain", "json", "csv"] {
        let one = lacasse(&[&args[..], &["--format", format, "--jobs", "1"]].concat());
        let four = lacasse(&[&args[..], &["--format", format, "--jobs", "4"]].concat());
        assert_eq!(one.status.code(), Some(0));
        assert_eq!(one.stdout, four.stdout, "format {format}");
    }
}

#[test]
fn verify_exit_codes() {
    let o = lacasse(&["verify", "--from", "1", "--to", "50"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("passed=true")).count(), 50);

    assert_eq!(lacasse(&["verify", "--from", "5", "--to", "3"]).status.code(), Some(2));
    assert_eq!(lacasse(&["verify", "--from", "0", "--to", "3"]).status.code(), Some(2));
    assert_eq!(lacasse(&["verify"]).status.code(), Some(2));
}

#[test]
fn series_and_bench() {
    let o = lacasse(&["series", "tree", "--order", "4", "--format", "json"]);
    let rows: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let coeffs: Vec<&str> = rows.iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["0", "1", "1", "3/2", "8/3"]);

    let o = lacasse(&["series", "geom", "--d", "2", "--order", "2", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("n,quantity,d,value,egf"));
    assert_eq!(text.lines().nth(3), Some("\"2\",\"geom\",\"2\",\"5\",\"10\""));

    let o = lacasse(&["bench", "--n-max", "30", "--d", "3", "--repetitions", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 31);
    assert!(text.lines().skip(1).all(|l| l.trim_end().ends_with("yes")));

    assert_eq!(lacasse(&["bench", "--n-max", "3", "--repetitions", "0"]).status.code(), Some(2));
}

#[test]
fn json_values_round_trip_exactly() {
    let o = lacasse(&["value", "q", "40", "--format", "json"]);
    let rec = &json_records(&o)[0];
    let exact = lacasse_core::identity::ramanujan_q(40).unwrap();
    assert_eq!(rec.exact_value().unwrap(), exact);
    assert_eq!(rec.exact_value().unwrap().to_string(), rec.value);
}
