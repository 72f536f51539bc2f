use super::*;
use crate::chase::{check_script, eval_config, replay, WeightedConfig};
use crate::exact::Weight;
use crate::harness::SweepSpec;
use crate::lang::{constraints_hold, eval_expr, parse_identity};
use crate::triangle::Coord;

fn bind(pairs: &[(&str, i64)]) -> Bindings {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn row(c: &WeightedConfig, n: u32) -> Vec<i64> {
    c.row_cells(n)
        .into_iter()
        .map(|(_, w)| i64::try_from(w.as_integer().unwrap()).unwrap())
        .collect()
}

#[test]
fn catalog_shape() {
    let list = catalog_list();
    // 22 listed ids; the printed-Lagrange erratum entry is hidden.
    assert_eq!(list.len(), 22);
    assert_eq!(list[0].id, "row_sum");
    let bosc = list.iter().find(|s| s.id == "boscarol").unwrap();
    assert_eq!(bosc.constraints, vec!["m <= n"]);
    let mut ids: Vec<&str> = catalog().iter().map(|e| e.id).collect();
    ids.sort();
    ids.dedup();
    assert_eq!(ids.len(), catalog().len());
    assert!(!list.iter().any(|s| s.id == "lagrange_as_printed"));
    assert!(builtin_identity("lagrange_as_printed").is_ok());
}

#[test]
fn builtin_identities() {
    assert_eq!(
        builtin_identity("row_sum").unwrap(),
        parse_identity("sum(k=0..n, C(n,k)) == 2^n for n").unwrap()
    );
    assert_eq!(
        builtin_identity("lagrange").unwrap(),
        parse_identity("sum(k=0..n, C(n,k)^2) == C(2*n,n) for n").unwrap()
    );
    assert_eq!(
        builtin_identity("hor").unwrap(),
        parse_identity("sum(k=n..2*n, (-1)^k * C(k,n) * C(n,k-n)) == 1 for n").unwrap()
    );
    assert!(matches!(builtin_identity("nope"), Err(ScriptError::UnknownId(_))));
}

#[test]
fn row_sum_two() {
    let s = generate_script("row_sum", &bind(&[("n", 2)])).unwrap();
    assert_eq!(row(&s.initial, 2), vec![1, 1, 1]);
    assert_eq!(s.expected_final, WeightedConfig::from_cells([(Coord::new(0, 0), 4)]));
    let r = check_script(&s);
    assert!(r.valid, "{r}");
    assert_eq!(r.value, Weight::integer(4));
}

#[test]
fn check_script_examples() {
    let r = check_script(&generate_script("row_sum", &bind(&[("n", 3)])).unwrap());
    assert!(r.valid);
    assert_eq!(r.value, Weight::integer(8));

    let s = generate_script("hockey_stick", &bind(&[("m", 2), ("n", 5)])).unwrap();
    let r = check_script(&s);
    assert!(r.valid);
    assert_eq!(r.value, Weight::integer(20));
    assert_eq!(s.expected_final, WeightedConfig::from_cells([(Coord::new(6, 3), 1)]));
}

#[test]
fn lagrange_builds_inverted_triangle() {
    let s = generate_script("lagrange", &bind(&[("n", 4)])).unwrap();
    let states = replay(&s).unwrap();
    let want: [(u32, &[i64]); 5] = [
        (8, &[1]),
        (7, &[1, 1]),
        (6, &[1, 2, 1]),
        (5, &[1, 3, 3, 1]),
        (4, &[1, 4, 6, 4, 1]),
    ];
    for (r, weights) in want {
        assert!(
            states.iter().any(|c| c.rows() == vec![r] && row(c, r) == weights),
            "row {r}"
        );
    }
    assert!(states.iter().all(|c| eval_config(c).unwrap() == Weight::integer(70)));
}

#[test]
fn alt_binom_rotated_triangle() {
    let s = generate_script("alt_binom", &bind(&[("n", 8), ("m", 3)])).unwrap();
    let states = replay(&s).unwrap();
    let want: [(u32, &[i64]); 4] = [
        (8, &[1, -4, 10, -20, 35, -56]),
        (7, &[1, -3, 6, -10, 15, -21]),
        (6, &[1, -2, 3, -4, 5, -6]),
        (5, &[1, -1, 1, -1, 1, -1]),
    ];
    for (r, weights) in want {
        assert!(
            states.iter().any(|c| c.rows() == vec![r] && row(c, r) == weights),
            "row {r}"
        );
    }
    assert!(check_script(&s).valid);
}

#[test]
fn boscarol_figure_weights() {
    let s = generate_script("boscarol", &bind(&[("m", 3), ("n", 7)])).unwrap();
    let states = replay(&s).unwrap();
    assert!(states.iter().any(|c| c.get(Coord::new(3, 3)) == Weight::integer(16)));
    assert!(states.iter().any(|c| c.get(Coord::new(4, 4)) == Weight::integer(16)));
    assert_eq!(row(states.last().unwrap(), 7), vec![2; 8]);
    let r = check_script(&s);
    assert!(r.valid, "{r}");
    assert_eq!(r.value, Weight::integer(256));
}

#[test]
fn weighted_row_first_lift() {
    let s = generate_script("weighted_row", &bind(&[("n", 6)])).unwrap();
    let states = replay(&s).unwrap();
    assert!(states
        .iter()
        .any(|c| c.rows() == vec![5] && row(c, 5) == [1, 3, 5, 7, 9, 11]));
    assert!(states.iter().any(|c| c.rows() == vec![5] && row(c, 5) == [6; 6]));
}

#[test]
fn hockey_gen_figure_seed() {
    let s = generate_script("hockey_gen", &bind(&[("l", 3), ("m", 3), ("n", 7)])).unwrap();
    assert_eq!(row(&s.initial, 8), vec![35, -15, 5, -1]);
    assert_eq!(
        s.expected_final.cells().map(|(c, _)| c.k).collect::<Vec<_>>(),
        vec![3; 5]
    );
    assert!(check_script(&s).valid);
}

#[test]
fn errors() {
    assert!(matches!(
        generate_script("nope", &Bindings::new()),
        Err(ScriptError::UnknownId(_))
    ));
    let e = generate_script("alt_binom", &bind(&[("n", 3), ("m", 3)])).unwrap_err();
    assert_eq!(e.to_string(), "alt_binom requires m < n");
    let e = generate_script("upside_down_cv", &bind(&[("l", 3), ("m", 3), ("n", 5)])).unwrap_err();
    assert!(e.to_string().contains("requires l + m <= n"));
    let e = generate_script("fib_row", &bind(&[("n", 3)])).unwrap_err();
    assert!(e.to_string().contains("no script available"));
    assert!(matches!(
        generate_script("row_sum", &Bindings::new()),
        Err(ScriptError::MissingParam { .. })
    ));
    assert!(matches!(
        generate_script("row_sum", &bind(&[("n", 1), ("q", 1)])),
        Err(ScriptError::UnexpectedParam { .. })
    ));
    assert!(generate_script("row_sum", &bind(&[("n", -1)]))
        .unwrap_err()
        .to_string()
        .contains("n >= 0"));
}

/// Every generator, every valid tuple with parameters at most 8: the script
/// checks, and its end configurations carry the two side values.
#[test]
fn generators_valid_small() {
    for entry in catalog().iter().filter(|e| e.has_script()) {
        let spec = SweepSpec::from_catalog(entry.id, 8).unwrap();
        let ast = entry.ast();
        let (tuples, _) = spec.instances(None).unwrap();
        let mut checked = 0;
        for b in tuples {
            if !constraints_hold(&ast, &b).unwrap() {
                continue;
            }
            let s = generate_script(entry.id, &b).unwrap();
            let r = check_script(&s);
            assert!(r.valid, "{} {:?}: {}", entry.id, b, r);
            let lhs = eval_expr(&ast.lhs, &b, &ast.indeterminates).unwrap();
            let rhs = eval_expr(&ast.rhs, &b, &ast.indeterminates).unwrap();
            assert_eq!(eval_config(&s.initial).unwrap(), lhs);
            assert_eq!(eval_config(&s.expected_final).unwrap(), rhs);
            checked += 1;
        }
        assert!(checked > 0, "{}", entry.id);
    }
}
