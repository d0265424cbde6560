use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::Registry;
use serde_json::Value;

const CACHE_ENV: &str = "ARBOREAL_TOWER_CACHE";

fn arboreal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arboreal"))
        .args(args)
        .env_remove(CACHE_ENV)
        .output()
        .expect("binary runs")
}

fn arboreal_cached(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arboreal"))
        .args(args)
        .env(CACHE_ENV, cache)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = arboreal(&full);
    assert!(out.status.success(), "{args:?}: {}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema")
}

const GOLDENS: &[(&str, &[&str])] = &[
    ("certify_z2_2z_a1.json", &["certify", "--poly", "z^2+2*z", "--prime", "2", "--base-point", "1", "--depth", "4"]),
    ("certify_z2_2z_a-1.json", &["certify", "--poly", "z^2+2*z", "--prime", "2", "--base-point", "-1", "--depth", "4"]),
    (
        "certify_z6_2z_a2_h5.json",
        &["certify", "--poly", "z^6+2*z", "--prime", "2", "--base-point", "2", "--depth", "4", "--horizon", "5"],
    ),
    ("newton_z4_2z.json", &["newton", "--poly", "0,-2,0,0,1", "--prime", "2"]),
    ("bad_dirs_z6_z4.json", &["bad-dirs", "--poly", "z^6+z^4", "--prime", "2"]),
    (
        "reduced_tree_z6_z4_a1.json",
        &["reduced-tree", "--poly", "z^6+z^4", "--prime", "2", "--base-point", "1", "--depth", "3"],
    ),
    ("tower_z2_a2.json", &["tower", "--poly", "z^2", "--prime", "2", "--base-point", "2", "--depth", "4"]),
    ("disc_val_z2_2z.json", &["disc-val", "--poly", "z^2+2*z", "--prime", "2", "--depth", "3"]),
    ("dump_tower_p3.json", &["dump-tower", "--prime", "3", "--depth", "6"]),
];

fn schema_for(args: &[&str]) -> &'static str {
    match args[0] {
        "certify" => "certificate.schema.json",
        "dump-tower" => "dump-tower.schema.json",
        "selftest" => "selftest.schema.json",
        _ => "report.schema.json",
    }
}

fn schema_errors(instance: &Value, schema_file: &str) -> Vec<String> {
    let base = "https://arboreal.invalid/schema/";
    let mut registry = Registry::new();
    let mut root = None;
    for name in ["common.schema.json", "report.schema.json", "certificate.schema.json", "dump-tower.schema.json", "selftest.schema.json"] {
        let text = std::fs::read_to_string(schema_dir().join(name)).unwrap();
        let schema: Value = serde_json::from_str(&text).unwrap();
        if name == schema_file {
            root = Some(schema.clone());
        }
        registry = registry.add(format!("{base}{name}"), schema).unwrap();
    }
    let registry = registry.prepare().unwrap();
    let validator = jsonschema::options().offline().with_registry(&registry).build(&root.unwrap()).unwrap();
    validator.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect()
}

fn validate(instance: &Value, schema_file: &str) {
    let errors = schema_errors(instance, schema_file);
    assert!(errors.is_empty(), "{schema_file}: {errors:#?}\n{instance:#}");
}

#[test]
fn goldens_are_byte_identical() {
    for (file, args) in GOLDENS {
        let mut full = args.to_vec();
        full.extend(["--format", "json"]);
        let out = arboreal(&full);
        assert!(out.status.success(), "{file}: {}", stderr(&out));
        let want = std::fs::read_to_string(golden_dir().join(file)).unwrap();
        assert_eq!(stdout(&out), want, "{file}");
    }
}

#[test]
fn goldens_match_the_published_schemas() {
    for (file, args) in GOLDENS {
        let text = std::fs::read_to_string(golden_dir().join(file)).unwrap();
        validate(&serde_json::from_str(&text).unwrap(), schema_for(args));
    }
}

#[test]
fn error_reports_and_selftest_match_the_schemas() {
    let err = json(&["bad-dirs", "--poly", "2*z^2+1", "--prime", "2"]);
    assert!(err["error"].is_string() && err.get("result").is_none());
    validate(&err, "report.schema.json");
    let err = json(&["reduced-tree", "--poly", "z^2", "--prime", "2", "--base-point", "1/2"]);
    assert_eq!(err["error"], "base point is not integral at p");
    validate(&err, "report.schema.json");
    validate(&json(&["selftest", "--seed", "3", "--cases", "5"]), "selftest.schema.json");
    let cert = json(&["certify", "--poly", "z^3+z+1", "--prime", "3", "--base-point", "1/3"]);
    assert_eq!(cert["verdict"], "unresolved");
    validate(&cert, "certificate.schema.json");
}

#[test]
fn schemas_reject_malformed_reports() {
    let text = std::fs::read_to_string(golden_dir().join("certify_z2_2z_a1.json")).unwrap();
    let good: Value = serde_json::from_str(&text).unwrap();
    let mutations: [(&str, Value); 4] = [
        ("/verdict", "wild".into()),
        ("/bound/A", "0.5".into()),
        ("/hypotheses/pcb", true.into()),
        ("/avoidance/N_of_a", "-inf".into()),
    ];
    for (ptr, v) in mutations {
        let mut bad = good.clone();
        *bad.pointer_mut(ptr).unwrap() = v;
        assert!(!schema_errors(&bad, "certificate.schema.json").is_empty(), "{ptr}");
    }
    let mut bad = good.clone();
    bad.as_object_mut().unwrap().insert("extra".into(), 1.into());
    assert!(!schema_errors(&bad, "certificate.schema.json").is_empty());

    let text = std::fs::read_to_string(golden_dir().join("newton_z4_2z.json")).unwrap();
    let mut bad: Value = serde_json::from_str(&text).unwrap();
    bad["error"] = "both".into();
    assert!(!schema_errors(&bad, "report.schema.json").is_empty());
    let mut bad: Value = serde_json::from_str(&text).unwrap();
    bad["result"]["segments"][0]["slope"] = (-0.333).into();
    assert!(!schema_errors(&bad, "report.schema.json").is_empty());
}

#[test]
fn certificate_round_trips_through_the_library_type() {
    let text = std::fs::read_to_string(golden_dir().join("certify_z2_2z_a1.json")).unwrap();
    let cert: arboreal_core::ramify::WildCertificate = serde_json::from_str(&text).unwrap();
    assert_eq!(serde_json::to_string_pretty(&cert).unwrap() + "\n", text);
}

fn scalar_leaves(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.values().for_each(|x| scalar_leaves(x, out)),
        Value::Array(xs) => xs.iter().for_each(|x| scalar_leaves(x, out)),
        Value::String(s) => out.push(s.clone()),
        Value::Number(n) => out.push(n.to_string()),
        Value::Bool(b) => out.push(b.to_string()),
        Value::Null => {}
    }
}

#[test]
fn text_and_json_agree_on_every_value() {
    for (file, args) in GOLDENS {
        if args[0] == "dump-tower" {
            continue;
        }
        let text = stdout(&arboreal(args));
        let mut leaves = Vec::new();
        scalar_leaves(&json(args), &mut leaves);
        for leaf in leaves {
            assert!(text.contains(&leaf), "{file}: {leaf:?} missing from text output");
        }
    }
    // dump-tower text is the cache table format
    let text = stdout(&arboreal(&["dump-tower", "--prime", "3", "--depth", "6"]));
    let j = json(&["dump-tower", "--prime", "3", "--depth", "6"]);
    for level in j["levels"].as_array().unwrap() {
        let cs: Vec<String> = level["coeffs"].as_array().unwrap().iter().map(|c| c.to_string()).collect();
        assert!(text.contains(&format!("{}: {}\n", level["degree"], cs.join(","))));
    }
}

#[test]
fn identical_inputs_give_identical_bytes() {
    for args in [
        &["selftest", "--seed", "11", "--cases", "10", "--format", "json"][..],
        &["certify", "--poly", "z^2+2*z", "--prime", "2", "--base-point", "1", "--format", "json"],
        &["reduced-tree", "--poly", "z^6+z^4", "--prime", "2", "--base-point", "1", "--depth", "3", "--format", "json"],
    ] {
        assert_eq!(arboreal(args).stdout, arboreal(args).stdout, "{args:?}");
    }
    let a = json(&["selftest", "--seed", "1", "--cases", "5"]);
    let b = json(&["selftest", "--seed", "2", "--cases", "5"]);
    assert_eq!(a["seed"], 1);
    assert_eq!(b["seed"], 2);
}

#[test]
fn worked_examples() {
    let cert = json(&["certify", "--poly", "z^2+2*z", "--prime", "2", "--base-point", "1", "--depth", "4"]);
    assert_eq!(cert["verdict"], "infinitely_wildly_ramified");
    assert_eq!(cert["branch"], "NoBadDirectionInTree");
    assert_eq!(cert["bound"]["M1"], 2);
    assert!(cert["hypotheses"].as_object().unwrap().values().all(|c| c == "pass"));

    let np = json(&["newton", "--poly", "0,-2,0,0,1", "--prime", "2"]);
    assert_eq!(np["result"]["segments"], serde_json::json!([{"slope": "-1/3", "length": 3}]));
    assert_eq!(np["result"]["root_valuations"][1], serde_json::json!({"val": "inf", "mult": 1}));

    let bd = json(&["bad-dirs", "--poly", "z^6+z^4", "--prime", "2"]);
    assert_eq!(bd["result"]["d0"], 2);
    assert_eq!(bd["result"]["bad_residues"], serde_json::json!(["level 1: [0]"]));
}

#[test]
fn unresolved_is_a_successful_run() {
    let out = arboreal(&["certify", "--poly", "z^2+2*z", "--prime", "2", "--base-point", "-1", "--format", "json"]);
    assert!(out.status.success());
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(cert["verdict"], "unresolved");
    assert_eq!(cert["unresolved_reason"], "avoidance: InClosure");
    let out = arboreal(&["tower", "--poly", "z^2+1", "--prime", "2", "--base-point", "1/2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("error:"));
}

#[test]
fn parse_errors_name_flag_and_position() {
    let out = arboreal(&["newton", "--poly", "z^2+*3", "--prime", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("--poly") && err.contains("position 4"), "{err}");

    for (args, flag) in [
        (&["newton", "--poly", "z^2", "--prime", "4"][..], "--prime"),
        (&["certify", "--poly", "z^2", "--prime", "2", "--base-point", "1/0"], "--base-point"),
        (&["certify", "--poly", "z^2", "--prime", "2", "--depth", "0"], "--depth"),
        (&["certify", "--poly", "z^2", "--prime", "2", "--horizon", "x"], "--horizon"),
        (&["newton", "--poly", "1,2,q", "--prime", "2"], "--poly"),
    ] {
        let out = arboreal(args);
        assert!(!out.status.success(), "{args:?}");
        assert!(stderr(&out).contains(flag), "{args:?}: {}", stderr(&out));
        assert!(out.stdout.is_empty());
    }
}

fn temp_path(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("arboreal-cache-{tag}-{}", std::process::id()))
}

#[test]
fn tower_cache_is_written_reused_and_validated() {
    let cache = temp_path("reuse");
    let _ = std::fs::remove_file(&cache);
    let args = ["reduced-tree", "--poly", "z^6+z^4", "--prime", "2", "--base-point", "1", "--depth", "3", "--format", "json"];
    let fresh = arboreal(&args);
    let first = arboreal_cached(&args, &cache);
    let table = std::fs::read_to_string(&cache).unwrap();
    assert!(table.starts_with("# p = 2\n1: 0,1\n"), "{table}");
    let second = arboreal_cached(&args, &cache);
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(fresh.stdout, second.stdout);

    // a cache for another prime is ignored and left untouched
    let other = arboreal_cached(&["bad-dirs", "--poly", "z^3+z", "--prime", "3", "--format", "json"], &cache);
    assert!(other.status.success());
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), table);

    // z^2+1 is reducible mod 2
    std::fs::write(&cache, "# p = 2\n2: 1,0,1\n").unwrap();
    let bad = arboreal_cached(&args, &cache);
    assert!(!bad.status.success());
    assert!(stderr(&bad).contains(CACHE_ENV));
    std::fs::remove_file(&cache).unwrap();
}

#[test]
fn dump_tower_text_seeds_an_equivalent_cache() {
    let cache = temp_path("seed");
    let table = stdout(&arboreal(&["dump-tower", "--prime", "2", "--depth", "6"]));
    std::fs::write(&cache, &table).unwrap();
    let args = ["reduced-tree", "--poly", "z^6+z^4", "--prime", "2", "--base-point", "1", "--depth", "3", "--format", "json"];
    assert_eq!(arboreal_cached(&args, &cache).stdout, arboreal(&args).stdout);
    std::fs::remove_file(&cache).unwrap();
}

#[test]
fn selftest_passes_for_several_seeds() {
    for seed in ["0", "1", "2"] {
        let out = arboreal(&["selftest", "--seed", seed, "--cases", "15"]);
        assert!(out.status.success(), "seed {seed}: {}", stdout(&out));
        assert!(stdout(&out).contains("ok: true"));
    }
}
