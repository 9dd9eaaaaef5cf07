use blendstring::parse::{parse_complex, parse_list};
use blendstring::problem::ProblemSpec;
use blendstring::scalar::C64;
use blendstring::{Blendstring, Error};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3..1e3f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

proptest! {
    #[test]
    fn complex_literals_round_trip(re in finite(), im in finite()) {
        let text = format!("{re:e}{im:+e}i");
        prop_assert_eq!(parse_complex::<C64>(&text).unwrap(), C64::new(re, im));
        prop_assert_eq!(parse_complex::<C64>(&format!("{re:?}")).unwrap(), C64::new(re, 0.0));
        prop_assert_eq!(parse_complex::<C64>(&format!("{im:e}i")).unwrap(), C64::new(0.0, im));
    }

    #[test]
    fn knot_lists_round_trip(values in prop::collection::vec((finite(), finite()), 1..8)) {
        let text = values
            .iter()
            .map(|(re, im)| format!("{re:e}{im:+e}i"))
            .collect::<Vec<_>>()
            .join(", ");
        let got = parse_list::<C64>(&text).unwrap();
        let want: Vec<C64> = values.iter().map(|&(re, im)| C64::new(re, im)).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn parsers_never_panic(text in ".{0,40}") {
        let _ = parse_complex::<C64>(&text);
        let _ = parse_list::<C64>(&text);
        let _ = Blendstring::<C64>::from_document(&text);
        let _ = ProblemSpec::from_toml(&text);
    }

    #[test]
    fn bad_list_entries_report_their_offset(prefix in prop::collection::vec(-10i32..10, 0..4)) {
        let mut text: String = prefix.iter().map(|v| format!("{v}, ")).collect();
        let offset = text.len();
        text.push_str("1+x");
        let err = parse_list::<C64>(&text).unwrap_err();
        prop_assert!(err.offset >= offset, "{} < {}", err.offset, offset);
    }
}

#[test]
fn fractions_and_signs() {
    assert_eq!(
        parse_complex::<C64>("1/4-3/8i").unwrap(),
        C64::new(0.25, -0.375)
    );
    assert_eq!(parse_complex::<C64>("-i").unwrap(), C64::new(0.0, -1.0));
    assert_eq!(
        parse_complex::<C64>("2.5e-3+1e+2i").unwrap(),
        C64::new(2.5e-3, 100.0)
    );
    for bad in ["", "inf", "nan", "1/0", "1+", "i i", "3j"] {
        assert!(parse_complex::<C64>(bad).is_err(), "{bad:?} accepted");
    }
}

#[test]
fn malformed_documents_name_the_location() {
    let good = r#"{"format_version": 1, "grade": 0,
        "knots": [{"re": 0, "im": 0}, {"re": 1, "im": 0}],
        "coefficients": [[{"re": 1, "im": 0}], [{"re": 2, "im": 0}]]}"#;
    assert!(Blendstring::<C64>::from_document(good).is_ok());

    let wrong_len = good.replace(
        r#"[{"re": 2, "im": 0}]"#,
        r#"[{"re": 2, "im": 0}, {"re": 2, "im": 0}]"#,
    );
    match Blendstring::<C64>::from_document(&wrong_len) {
        Err(Error::Document { path, .. }) => assert_eq!(path, "coefficients[1]"),
        other => panic!("unexpected {other:?}"),
    }
    let version = good.replace("\"format_version\": 1", "\"format_version\": 7");
    assert!(matches!(
        Blendstring::<C64>::from_document(&version),
        Err(Error::Document { .. })
    ));

    let broken = good.replace("\"grade\": 0,\n", "\"grade\": ,\n");
    match Blendstring::<C64>::from_document(&broken) {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
        other => panic!("unexpected {other:?}"),
    }
    let extra = good.replace("\"grade\": 0", "\"grade\": 0, \"colour\": 3");
    assert!(Blendstring::<C64>::from_document(&extra).is_err());
}

#[test]
fn problem_documents_accept_every_path_form() {
    let text = r#"
equation = "mathieu(2.0886989, 2.157i)"
path = [0, [1.5, 0], "3.14159"]
y0 = "1"
y1 = 0
grade = 10
tol = 1e-9
"#;
    let spec = ProblemSpec::from_toml(text).unwrap();
    assert_eq!(spec.problem.path[1], C64::new(1.5, 0.0));
    assert_eq!(spec.problem.grade, 10);
}

#[test]
fn fuzz_corpus_seeds_load_or_fail_cleanly() {
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus");
    let seeds = |target: &str| -> Vec<String> {
        let mut out: Vec<String> = std::fs::read_dir(root.join(target))
            .unwrap()
            .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
            .collect();
        out.sort();
        out
    };
    let docs = seeds("blendstring_document");
    assert!(
        docs.iter()
            .filter(|d| Blendstring::<C64>::from_document(d).is_ok())
            .count()
            >= 2
    );
    let problems = seeds("problem_document");
    assert!(
        problems
            .iter()
            .filter(|d| ProblemSpec::from_toml(d).is_ok())
            .count()
            >= 3
    );
    for s in seeds("complex_literal") {
        assert!(parse_complex::<C64>(&s).is_ok(), "{s:?}");
    }
    for s in seeds("knot_list") {
        let _ = parse_list::<C64>(&s);
    }
}
