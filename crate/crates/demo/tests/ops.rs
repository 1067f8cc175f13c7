use regudist_demo::ops;
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn preloaded_game_solves() {
    let v = parse(&ops::solve(&ops::example_game()).unwrap());
    assert_eq!(v["solved"], true);
    assert_eq!(v["beta1"], "1/2");
    assert_eq!(v["beta2"], "1/2");
    assert_eq!(v["value"], "1/2");
    assert_eq!(v["A"], "2");
}

#[test]
fn line_delta_steps_at_its_point() {
    let v = parse(&ops::line_delta("1/4", "1/3", "1/2").unwrap());
    assert_eq!(v["integral"], "1");
    assert_eq!(v["below"], "0");
    assert_eq!(v["at"], "2/3");
    assert_eq!(v["above"], "1");
    assert!(ops::line_delta("x", "1/3", "0").is_err());
    assert!(ops::line_delta("1", "1/3", "0").is_err());
    assert!(ops::line_delta("0", "1/3", "3/2").is_err());
}

#[test]
fn table_is_exact_once_the_support_fits() {
    let rows = parse(&ops::delta_table("1", "1/10", 100).unwrap());
    let rows = rows.as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        if r["k"].as_u64().unwrap() > 10 {
            assert_eq!(r["abs_error"], 0.0, "{r}");
        }
    }
    assert!(ops::delta_table("1", "1/10", 0).is_err());
}
