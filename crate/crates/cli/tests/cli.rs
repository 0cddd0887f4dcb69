use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_freeprod")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = run(&all);
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}"))
}

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/output.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Checks `v` against the keywords the shipped schema uses: `$ref` into
/// `$defs`, `oneOf`, `type`, `const`, `enum`, `required`, `properties`,
/// `additionalProperties: false`, `items` and `minimum`.
fn validate(root: &Value, s: &Value, v: &Value) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").ok_or(format!("unsupported $ref {r}"))?;
        return validate(root, &root["$defs"][name], v);
    }
    if let Some(options) = s.get("oneOf").and_then(Value::as_array) {
        let ok = options.iter().filter(|o| validate(root, o, v).is_ok()).count();
        if ok != 1 {
            return Err(format!("{ok} oneOf branches match {v}"));
        }
    }
    if let Some(t) = s.get("type") {
        let types: Vec<&str> = match t {
            Value::String(x) => vec![x.as_str()],
            Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
            _ => return Err("bad type".into()),
        };
        let fits = types.iter().any(|t| match *t {
            "object" => v.is_object(),
            "array" => v.is_array(),
            "string" => v.is_string(),
            "integer" => v.is_u64() || v.is_i64() || v.as_number().is_some_and(|n| !n.to_string().contains(['.', 'e', 'E'])),
            "null" => v.is_null(),
            "boolean" => v.is_boolean(),
            _ => false,
        });
        if !fits {
            return Err(format!("{v} is not {types:?}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{v} != {c}"));
        }
    }
    if let Some(e) = s.get("enum").and_then(Value::as_array) {
        if !e.contains(v) {
            return Err(format!("{v} not in {e:?}"));
        }
    }
    if let (Some(min), Some(n)) = (s.get("minimum").and_then(Value::as_u64), v.as_number()) {
        if n.to_string().starts_with('-') || n.as_u64().is_some_and(|x| x < min) {
            return Err(format!("{v} below {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !obj.contains_key(key.as_str().unwrap()) {
                return Err(format!("missing {key}"));
            }
        }
        let props = s.get("properties").and_then(Value::as_object);
        for (k, val) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(ps) => validate(root, ps, val).map_err(|e| format!("{k}: {e}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("unexpected property {k}"))
                }
                None => {}
            }
        }
    }
    if let (Some(items), Some(arr)) = (s.get("items"), v.as_array()) {
        for x in arr {
            validate(root, items, x)?;
        }
    }
    Ok(())
}

const COMMANDS: &[&[&str]] = &[
    &["dims", "--left", "as", "--right", "as", "-n", "5"],
    &["dims", "--symbolic", "-n", "4"],
    &["confluence", "--rules", "lie", "--samples", "5", "--seed", "1"],
    &["confluence", "--rules", "lie-adm.rules"],
    &["count-normal", "--rules", "lie-adm", "-n", "4"],
    &["basis", "--left", "lie", "--right", "com-as", "-n", "3", "--root", "bullet"],
    &["quotient", "--left", "lie", "--right", "com-as", "--pattern", "bullet-composite-child", "-n", "4"],
    &["sp", "--count", "-n", "5"],
    &["sp", "--list", "-n", "4"],
    &["sp", "--sequence", "-n", "7"],
    &["normal-form", "--rules", "lie", "x(x(x(1 2) 3) 4)"],
];

#[test]
fn json_matches_schema() {
    let root = schema();
    for args in COMMANDS {
        let v = json(args);
        validate(&root, &root, &v).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    }
    let bogus = serde_json::json!({"command": "dims", "left": "as"});
    assert!(validate(&root, &root, &bogus).is_err());
}

#[test]
fn output_is_deterministic() {
    for args in COMMANDS {
        let mut with_json = vec!["--format", "json"];
        with_json.extend_from_slice(args);
        for a in [args.to_vec(), with_json] {
            let first = run(&a).stdout;
            let second = run(&a).stdout;
            assert_eq!(first, second, "{a:?}");
        }
    }
}

#[test]
fn dims_tables() {
    let out = stdout(&["dims", "--left", "as", "--right", "as", "-n", "5"]);
    assert!(out.lines().last().unwrap().ends_with("10800"));
    let v = json(&["dims", "--left", "lie", "--right", "com", "-n", "7"]);
    let totals: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["total"].as_u64().unwrap()).collect();
    assert_eq!(totals, [1, 2, 11, 101, 1299, 21484, 434314]);
    let v = json(&["dims", "--left", "lie", "--right", "nov", "-n", "5"]);
    assert_eq!(v["rows"][4]["total"].as_u64(), Some(3274));
}

#[test]
fn symbolic_layout() {
    let out = stdout(&["dims", "--symbolic", "-n", "3"]);
    assert!(out.lines().any(|l| l == "d3_bullet = x3 + 3*x2*y2"), "{out}");
}

#[test]
fn operad_config_file() {
    let dir = std::env::temp_dir().join(format!("freeprod-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ops.txt");
    std::fs::write(&path, "twisted = [2, 6], builtin:as\n").unwrap();
    let p = path.to_str().unwrap();
    let a = json(&["dims", "--config", p, "--left", "twisted", "--right", "as", "-n", "5"]);
    let b = json(&["dims", "--left", "as", "--right", "as", "-n", "5"]);
    assert_eq!(a["rows"], b["rows"]);
    std::fs::write(&path, "bad = [1, x]\n").unwrap();
    assert_eq!(run(&["dims", "--config", p, "--left", "bad", "--right", "as", "-n", "3"]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn confluence_exit_codes() {
    let out = stdout(&["confluence", "--rules", "lie.rules", "--max-arity", "5"]);
    assert!(out.starts_with("PASS"));
    let v = json(&["confluence", "--rules", "lie.rules"]);
    assert_eq!(v["overlap_classes"], 1);
    assert_eq!(v["overlaps"][0]["arity"], 4);
    assert!(stdout(&["confluence", "--rules", "builtin:lie-adm"]).starts_with("PASS"));

    let dir = std::env::temp_dir().join(format!("freeprod-rules-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.rules");
    std::fs::write(&path, "x(x(1 2) 3) = x(1 x(2 3)) + 2*x(x(1 3) 2)\n").unwrap();
    let out = run(&["confluence", "--rules", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("FAIL"));
    std::fs::write(&path, "x(x(1 2) 3) = x(2 1)\n").unwrap();
    assert_eq!(run(&["confluence", "--rules", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn counting_commands() {
    assert_eq!(json(&["count-normal", "--rules", "lie-adm.rules", "-n", "5"])["count"], 1299);
    assert_eq!(json(&["count-normal", "--rules", "lie", "-n", "5"])["count"], 24);
    let q = json(&["quotient", "--left", "lie", "--right", "com-as", "--pattern", "bullet-composite-child", "-n", "4"]);
    assert_eq!((q["total"].as_u64(), q["avoiding"].as_u64(), q["containing"].as_u64()), (Some(67), Some(24), Some(43)));
    assert_eq!(json(&["sp", "--count", "-n", "5"])["count"], 24);
    assert_eq!(json(&["sp", "--list", "-n", "4"])["networks"].as_array().unwrap().len(), 10);
    assert_eq!(json(&["basis", "--left", "lie", "--right", "com-as", "-n", "4"])["count"], 67);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["dims", "--left", "nope", "--right", "as", "-n", "3"][..],
        &["dims", "--left", "as", "-n", "3"],
        &["dims", "--left", "as", "--right", "as", "-n", "1"],
        &["count-normal", "--rules", "missing.rules", "-n", "3"],
        &["count-normal", "--rules", "lie", "-n", "9"],
        &["quotient", "--left", "lie", "--right", "com", "--pattern", "zigzag", "-n", "3"],
        &["normal-form", "--rules", "lie", "x(2 1)"],
        &["sp", "--list", "--sequence", "-n", "3"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_freeprod"))
        .args(["confluence", "--rules", "lie-adm"])
        .env("FREEPROD_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(out.stdout, run(&["confluence", "--rules", "lie-adm"]).stdout);
}
