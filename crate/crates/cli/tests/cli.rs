use std::path::PathBuf;
use std::process::Command;

use schur_cli::{
    run, ErrorReport, Outcome, Report, EXIT_AMALGAM, EXIT_CAPACITY, EXIT_OK, EXIT_USAGE,
};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/corpus")
        .join(name)
        .display()
        .to_string()
}

fn schur(args: &[&str]) -> schur_cli::Output {
    let mut full = vec!["schur".to_string()];
    full.extend(args.iter().map(|s| s.to_string()));
    run(full)
}

/// Every invocation in the corpus with its expected exit code.
fn invocations() -> Vec<(Vec<String>, u8)> {
    let table = format!("table:{}", corpus("c3.table"));
    let bad_table = format!("table:{}", corpus("bad.table"));
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    vec![
        (s(&["expr", "Z/4 * Z/6"]), EXIT_OK),
        (s(&["expr", "Z x Z", "--trace"]), EXIT_OK),
        (s(&["expr", "Z/2 x Z/2", "--check"]), EXIT_OK),
        (s(&["expr", "Z/2 x Z/2", "--check", "--trace"]), EXIT_OK),
        (s(&["expr", "Ab(Z^3 + Z/2) * D4"]), EXIT_OK),
        (s(&["expr", "Q8 x Z/3", "--check"]), EXIT_OK),
        (s(&["expr", "S3 x Z/2", "--trace"]), EXIT_OK),
        (s(&["expr", &format!("{table} x Z/3")]), EXIT_OK),
        (s(&["expr", "Z/2 x"]), EXIT_USAGE),
        (s(&["expr", "Z * Z/2", "--check"]), EXIT_USAGE),
        (s(&["expr", "Z/5 x Z/5", "--check"]), EXIT_CAPACITY),
        (
            s(&["expr", "Z/3 x Z/3", "--check", "--cap", "8"]),
            EXIT_CAPACITY,
        ),
        (s(&["expr", &bad_table]), EXIT_USAGE),
        (s(&["pres", "<a,b | a^2, b^2, [a,b]>"]), EXIT_OK),
        (
            s(&["pres", "<a,b,c | [a,b], [a,c], [b,c]>", "--aspherical"]),
            EXIT_OK,
        ),
        (s(&["pres", "<a | a^5>"]), EXIT_OK),
        (s(&["pres", "<a,b | a^2, c>"]), EXIT_USAGE),
        (s(&["pres", "<a,a | a>"]), EXIT_USAGE),
        (s(&["pres", "<a | a^2"]), EXIT_USAGE),
        (s(&["pres", "<a | a>", "--check"]), EXIT_USAGE),
        (s(&["oracle", "D4"]), EXIT_OK),
        (s(&["oracle", "Z/2 x Z/2", "--check"]), EXIT_OK),
        (s(&["oracle", "perm:(1 2 3);(1 2)"]), EXIT_OK),
        (s(&["oracle", "perm:(1 2 3 4 5)"]), EXIT_OK),
        (s(&["oracle", "perm:(1 2 3 4 5);(1 2)"]), EXIT_CAPACITY),
        (s(&["oracle", "perm:(1 2"]), EXIT_USAGE),
        (s(&["oracle", "Z"]), EXIT_USAGE),
        (s(&["oracle", "A4 x Z/3"]), EXIT_CAPACITY),
        (s(&["amalgam", &corpus("sl2z.json")]), EXIT_OK),
        (s(&["amalgam", &corpus("trefoil.json")]), EXIT_OK),
        (s(&["amalgam", &corpus("undetermined.json")]), EXIT_OK),
        (s(&["amalgam", &corpus("unknown_alpha.json")]), EXIT_OK),
        (s(&["amalgam", &corpus("ill_defined.json")]), EXIT_AMALGAM),
        (s(&["amalgam", &corpus("bad_shape.json")]), EXIT_AMALGAM),
        (s(&["amalgam", &corpus("no_such_file.json")]), EXIT_USAGE),
    ]
}

#[test]
fn spec_examples() {
    let out = schur(&["expr", "Z/4 * Z/6"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.lines().next(), Some("M(G) = 0"));

    let out = schur(&["expr", "Z x Z", "--trace"]);
    assert_eq!(out.stdout.lines().next(), Some("M(G) = Z"));
    assert!(out.stdout.contains("[direct product] M(Z x Z)"));

    let out = schur(&["pres", "<a,b | a^2, b^2, [a,b]>"]);
    assert!(out.stdout.contains("h2_complex = Z\n"));
    assert!(out.stdout.contains("relator_bound = 3\n"));
    assert!(out.stdout.contains("exact = false\n"));

    let out = schur(&["expr", "Z/2 x Z/2", "--check"]);
    assert_eq!(
        out.stdout.lines().next(),
        Some("M(G) = Z/2 (oracle agrees)")
    );
}

#[test]
fn exit_codes_match_the_corpus() {
    for (args, code) in invocations() {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = schur(&refs);
        assert_eq!(out.code, code, "{args:?}: {}{}", out.stdout, out.stderr);
        if code == EXIT_OK {
            assert!(out.stderr.is_empty(), "{args:?}");
        } else {
            assert!(out.stdout.is_empty(), "{args:?}");
            assert!(out.stderr.starts_with("error: "), "{args:?}");
        }
    }
}

#[test]
fn json_validates_against_the_documented_schema() {
    let schema_path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../book/src/report.schema.json");
    let schema: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let validator = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    for (mut args, code) in invocations() {
        args.push("--json".into());
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = schur(&refs);
        assert_eq!(out.code, code, "{args:?}");
        let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        if let Err(errors) = validator.validate(&value) {
            let errors: Vec<String> = errors
                .map(|e| format!("{e} at {}", e.instance_path))
                .collect();
            panic!("{args:?} does not validate: {errors:?}\n{}", out.stdout);
        }
        if code == EXIT_OK {
            let report: Report = serde_json::from_str(&out.stdout).unwrap();
            let again: Report =
                serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
            assert_eq!(again, report);
        } else {
            let err: ErrorReport = serde_json::from_str(&out.stdout).unwrap();
            assert_eq!(err.error.exit_code, code);
        }
    }
}

#[test]
fn syntax_errors_report_positions() {
    let out = schur(&["--json", "pres", "<a,b | a^2, c>"]);
    let err: ErrorReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(err.error.kind, "unknown_generator");
    assert_eq!(err.error.position, Some(12));

    let out = schur(&["expr", "Z/2 x"]);
    assert!(out.stderr.contains("position 5"));
    assert!(out.stderr.contains("\n       ^\n"));

    let out = schur(&["--json", "oracle", "perm:(1 2);(1 x)"]);
    let err: ErrorReport = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(err.error.kind, "syntax");
    assert_eq!(err.error.position, Some(11));
}

#[test]
fn amalgam_results() {
    for name in ["sl2z.json", "trefoil.json"] {
        let out = schur(&["--json", "amalgam", &corpus(name)]);
        let report: Report = serde_json::from_str(&out.stdout).unwrap();
        let Outcome::Amalgam(sol) = report.outcome else {
            panic!()
        };
        assert!(sol.determined, "{name}");
        assert!(sol.value.unwrap().is_trivial(), "{name}");
    }
    let out = schur(&["amalgam", &corpus("undetermined.json")]);
    assert!(out.stdout.contains("determined = false\n"));
    assert!(!out.stdout.contains("M(G) ="));
    let out = schur(&["amalgam", &corpus("unknown_alpha.json")]);
    assert!(out.stdout.starts_with("sub = unknown\n"));
}

#[test]
fn oracle_output() {
    let out = schur(&["oracle", "D4"]);
    assert_eq!(out.stdout, "|G| = 8\nH1 = Z/2 + Z/2\nH2 = Z/2\n");
    let out = schur(&["oracle", "Z/2 x Z/4", "--check"]);
    assert_eq!(out.code, 0);
    assert!(out
        .stdout
        .ends_with("H2 = Z/2 (compositional rule agrees)\n"));
    let out = schur(&["oracle", "perm:(1 2);(3 4)", "--check"]);
    assert_eq!(out.code, EXIT_USAGE);
}

#[test]
fn help_and_version_succeed() {
    let out = schur(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("expr"));
    assert_eq!(schur(&["--version"]).code, 0);
    assert_eq!(schur(&[]).code, EXIT_USAGE);
    assert_eq!(schur(&["expr"]).code, EXIT_USAGE);
    assert_eq!(schur(&["--cap", "x", "expr", "Z"]).code, EXIT_USAGE);
}

#[test]
fn binary_uses_the_same_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_schur");
    let ok = Command::new(bin)
        .args(["expr", "Z/2 x Z/2", "--check"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(ok.stdout).unwrap().lines().next(),
        Some("M(G) = Z/2 (oracle agrees)")
    );
    let cap = Command::new(bin)
        .args(["oracle", "Z/5 x Z/5"])
        .output()
        .unwrap();
    assert_eq!(cap.status.code(), Some(2));
    let ill = Command::new(bin)
        .args(["amalgam", &corpus("ill_defined.json")])
        .output()
        .unwrap();
    assert_eq!(ill.status.code(), Some(3));
    let syntax = Command::new(bin)
        .args(["pres", "<a | b>"])
        .output()
        .unwrap();
    assert_eq!(syntax.status.code(), Some(1));
}
