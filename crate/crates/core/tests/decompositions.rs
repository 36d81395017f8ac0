mod oracle;

use std::collections::BTreeSet;

use oracle::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use shrubkit::bush::{
    appendix_digraph, build_bush, check_first_separation, decode_bush, one_label, restrict_bush,
    wcol_bound, Bush,
};
use shrubkit::gen::{random_formula, rng};
use shrubkit::graph::ColoredGraph;
use shrubkit::logic::parse_formula;
use shrubkit::quasibush::{
    build_separator_quasibush, check_splitter_properties, decode_quasibush, label_quasibush,
    one_label_quasibush, quasibush_stats, restrict_quasibush, QuasiBush, SeparatorQuasiBush,
};
use shrubkit::wcol::{heuristic_order, wcol_of_order, Strategy as OrderStrategy};
use shrubkit::{Error, VertexOrder};

fn orders(g: &ColoredGraph) -> Vec<VertexOrder> {
    OrderStrategy::ALL
        .iter()
        .map(|&s| heuristic_order(g, s))
        .collect()
}

#[test]
fn bush_decodes_to_the_interpretation() {
    let mut rng = rng(11);
    let formulas = suite_formulas();
    for (i, (name, g)) in suite(&mut rng, 45, 24).into_iter().enumerate() {
        let ord = heuristic_order(&g, OrderStrategy::ALL[i % 3]);
        for (text, phi, r, q) in &formulas {
            let b =
                build_bush(&g, &ord, *r, *q, phi).unwrap_or_else(|e| panic!("{name} {text}: {e}"));
            assert_eq!(
                decode_bush(&b).unwrap(),
                interpret_naive(&g, phi),
                "{name} {text}"
            );
            let back = Bush::from_json(&b.to_json()).unwrap();
            assert_eq!(back, b);
        }
    }
}

#[test]
fn bush_checks_hold_on_the_suite() {
    let mut rng = rng(12);
    let e = parse_formula("E(x,y)").unwrap();
    for (name, g) in suite(&mut rng, 24, 20) {
        for ord in orders(&g) {
            for r in 1..=2 {
                let b = build_bush(&g, &ord, r, 1, &e).unwrap();
                for s in 1..=2 {
                    let ineq = wcol_bound(&b, &g, &ord, r, s);
                    assert!(ineq.holds, "{name} r={r} s={s}: {ineq:?}");
                }
                check_first_separation(&b, &g, &ord, r).unwrap();
                let app = appendix_digraph(&b, &g, &ord, r).unwrap();
                assert!(app.max_outdeg as u128 <= app.bound);
            }
        }
    }
}

#[test]
fn restricted_bush_decodes_to_the_induced_subgraph() {
    let mut rng = rng(13);
    let d2 = parse_formula(D2).unwrap();
    for (name, g) in suite(&mut rng, 20, 20) {
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        let b = build_bush(&g, &ord, 2, 1, &d2).unwrap();
        let full = decode_bush(&b).unwrap();
        for _ in 0..4 {
            let keep: BTreeSet<usize> = (0..g.n()).filter(|_| rng.gen_bool(0.5)).collect();
            let rb = restrict_bush(&b, &keep).unwrap();
            rb.validate().unwrap();
            let dec = decode_bush(&rb).unwrap();
            assert_eq!(dec.arcs, induced_digraph(&full, &keep), "{name} {keep:?}");
        }
    }
}

#[test]
fn one_label_bush_keeps_the_decoding() {
    let mut rng = rng(14);
    let formulas = suite_formulas();
    for (i, (name, g)) in suite(&mut rng, 30, 16).into_iter().enumerate() {
        let (text, phi, r, q) = &formulas[i % formulas.len()];
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        let b = build_bush(&g, &ord, *r, *q, phi).unwrap();
        let ol = one_label(&b).unwrap();
        assert_eq!(ol.bush.depth, b.depth + 1, "{name} {text}");
        assert!(ol.bush.label_count() <= 1);
        assert_eq!(
            decode_bush(&ol.bush).unwrap(),
            decode_bush(&b).unwrap(),
            "{name} {text}"
        );
    }
}

#[test]
fn inadequate_rank_reports_a_true_witness() {
    let p4 = ColoredGraph::path(4);
    let d2 = parse_formula(D2).unwrap();
    let ord = VertexOrder::identity(4);
    let Err(Error::Adequacy {
        witness: [u, v, u2, v2],
    }) = build_bush(&p4, &ord, 1, 0, &d2)
    else {
        panic!("expected an adequacy failure");
    };
    let truth = interpret_naive(&p4, &d2);
    assert_ne!(truth.has_arc(u, v), truth.has_arc(u2, v2));
    let Err(Error::Adequacy {
        witness: [u, v, u2, v2],
    }) = build_separator_quasibush(&p4, &ord, 1).and_then(|s| label_quasibush(&s, &p4, &d2, 0))
    else {
        panic!("expected an adequacy failure");
    };
    assert_ne!(truth.has_arc(u, v), truth.has_arc(u2, v2));
}

#[test]
fn splitter_properties_hold() {
    let mut rng = rng(21);
    for (name, g) in suite(&mut rng, 24, 24) {
        for ord in orders(&g) {
            for r in 1..=2 {
                let s = build_separator_quasibush(&g, &ord, r).unwrap();
                let rep = check_splitter_properties(&g, &ord, r, &s.traces);
                assert!(rep.holds(), "{name} r={r}: {rep:?}");
                assert_eq!(rep.sources, g.n());
                for t in &s.traces {
                    for &((i, k), ref path) in &t.paths {
                        assert!(i <= k && k < t.m.len());
                        assert_eq!((path[0], path[path.len() - 1]), (t.m[i], t.m[k]));
                        assert!(
                            path.len() <= 2 * r + 1,
                            "{name}: path {path:?} longer than {}",
                            2 * r
                        );
                        assert!(path.windows(2).all(|e| g.has_edge(e[0], e[1])));
                        assert!(path.iter().all(|x| t.separators[k + 1].contains(x)));
                    }
                }
            }
        }
    }
}

/// For every ordered pair `(u, v)`, the separator of the lowest ancestor of
/// `v` pointed to by `u` meets every short `u`-`v` path; checked by path
/// enumeration.
fn separator_contract_by_paths(s: &SeparatorQuasiBush, g: &ColoredGraph) -> usize {
    let leaf = s.leaf_of_vertex();
    let mut checked = 0;
    for u in 0..g.n() {
        for v in (0..g.n()).filter(|&v| v != u) {
            let w = *ancestors(s, leaf[&v])
                .iter()
                .rev()
                .find(|&&w| s.pointers.contains(&(leaf[&u], w)))
                .unwrap();
            assert!(
                separated_paths(g, u, v, s.r, &s.alpha[&w]),
                "pair ({u}, {v}) node {w}"
            );
            checked += 1;
        }
    }
    checked
}

fn ancestors(s: &SeparatorQuasiBush, mut x: usize) -> Vec<usize> {
    let mut out = vec![x];
    while let Some(p) = s.nodes[x].parent {
        out.push(p);
        x = p;
    }
    out.reverse();
    out
}

#[test]
fn separator_contract_holds_by_path_enumeration() {
    let mut rng = rng(22);
    for (_, g) in suite(&mut rng, 18, 18) {
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        for r in 1..=2 {
            let s = build_separator_quasibush(&g, &ord, r).unwrap();
            assert_eq!(separator_contract_by_paths(&s, &g), g.n() * (g.n() - 1));
        }
    }
}

#[test]
fn quasibush_decodes_to_the_interpretation() {
    let mut rng = rng(23);
    let formulas = suite_formulas();
    for (i, (name, g)) in suite(&mut rng, 36, 24).into_iter().enumerate() {
        let ord = heuristic_order(&g, OrderStrategy::ALL[i % 3]);
        for (text, phi, r, q) in &formulas {
            let s = build_separator_quasibush(&g, &ord, *r).unwrap();
            let b =
                label_quasibush(&s, &g, phi, *q).unwrap_or_else(|e| panic!("{name} {text}: {e}"));
            assert_eq!(
                decode_quasibush(&b).unwrap(),
                interpret_naive(&g, phi),
                "{name} {text}"
            );
            assert_eq!(QuasiBush::from_json(&b.to_json()).unwrap(), b);
            assert_eq!(
                SeparatorQuasiBush::from_json(&s.to_json(), *r)
                    .unwrap()
                    .pointers,
                s.pointers
            );
        }
    }
}

#[test]
fn restricted_quasibush_decodes_to_the_induced_subgraph() {
    let mut rng = rng(24);
    let e = parse_formula("E(x,y)").unwrap();
    for (name, g) in suite(&mut rng, 20, 20) {
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        let s = build_separator_quasibush(&g, &ord, 1).unwrap();
        let b = label_quasibush(&s, &g, &e, 1).unwrap();
        let full = decode_quasibush(&b).unwrap();
        for _ in 0..4 {
            let mut vs: Vec<usize> = (0..g.n()).collect();
            vs.shuffle(&mut rng);
            let keep: BTreeSet<usize> = vs.into_iter().take(rng.gen_range(1..=g.n())).collect();
            let rb = restrict_quasibush(&b, &keep).unwrap();
            rb.validate().unwrap();
            let dec = decode_quasibush(&rb).unwrap();
            assert_eq!(dec.arcs, induced_digraph(&full, &keep), "{name}");
        }
    }
}

#[test]
fn one_label_quasibush_keeps_the_decoding() {
    let mut rng = rng(25);
    let formulas = suite_formulas();
    for (i, (name, g)) in suite(&mut rng, 24, 16).into_iter().enumerate() {
        let (text, phi, r, q) = &formulas[i % formulas.len()];
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        let b = label_quasibush(
            &build_separator_quasibush(&g, &ord, *r).unwrap(),
            &g,
            phi,
            *q,
        )
        .unwrap();
        let ol = one_label_quasibush(&b).unwrap();
        assert_eq!(ol.depth(), b.depth() + 1, "{name} {text}");
        assert_eq!(ol.label_count(), 1.min(g.n()));
        assert_eq!(
            decode_quasibush(&ol).unwrap(),
            decode_quasibush(&b).unwrap(),
            "{name} {text}"
        );
    }
}

#[test]
fn quasibush_stats_hold() {
    let mut rng = rng(26);
    for (name, g) in suite(&mut rng, 18, 20) {
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        for r in 1..=2 {
            let s = build_separator_quasibush(&g, &ord, r).unwrap();
            let st = quasibush_stats(&s, &g, &ord);
            assert!(st.holds(), "{name} r={r}: {st:?}");
            // |alpha| is bounded by the path budget around M
            assert!(st.max_alpha <= 2 * r * st.max_m * st.max_m + st.max_m);
            assert!(st.max_m <= wcol_of_order(&g, &ord, r));
        }
    }
}

fn instance() -> impl Strategy<Value = (ColoredGraph, u64)> {
    (0usize..3, 2usize..12, any::<u64>()).prop_map(|(family, max_n, seed)| {
        let mut r = rng(seed);
        let (_, mut g) = shrubkit::gen::family_instance(family, max_n, &mut r);
        shrubkit::gen::add_random_colors(&mut g, &["red", "blue"], 0.4, &mut r);
        (g, seed)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Symmetric formulas decode to symmetric digraphs through both
    /// decompositions, whichever side of a pair carries the pointer.
    #[test]
    fn symmetric_formulas_decode_symmetrically((g, seed) in instance()) {
        let mut r = rng(seed);
        let base = random_formula(&mut r, &["x", "y"], 1, &["red", "blue"], 5);
        let swapped = parse_formula(&base.to_string().replace('x', "#").replace('y', "x").replace('#', "y"));
        prop_assume!(swapped.is_ok());
        let phi = shrubkit::Formula::and(base, swapped.unwrap());
        let want = interpret_naive(&g, &phi);
        let ord = heuristic_order(&g, OrderStrategy::Degeneracy);
        for (rad, q) in [(1, 2), (2, 1)] {
            let s = build_separator_quasibush(&g, &ord, rad).unwrap();
            match label_quasibush(&s, &g, &phi, q) {
                Ok(b) => {
                    let d = decode_quasibush(&b).unwrap();
                    prop_assert_eq!(&d, &want);
                    prop_assert_eq!(&decode_quasibush_naive(&b, false), &want);
                    prop_assert_eq!(&decode_quasibush_naive(&b, true), &want);
                    for &(u, v) in &d.arcs {
                        prop_assert!(d.has_arc(v, u));
                    }
                }
                Err(Error::Adequacy { witness: [u, v, u2, v2] }) => {
                    prop_assert_ne!(want.has_arc(u, v), want.has_arc(u2, v2));
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
            match build_bush(&g, &ord, rad, q, &phi) {
                Ok(b) => prop_assert_eq!(decode_bush(&b).unwrap(), want.clone()),
                Err(Error::Adequacy { witness: [u, v, u2, v2] }) => {
                    prop_assert_ne!(want.has_arc(u, v), want.has_arc(u2, v2));
                }
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }
}
