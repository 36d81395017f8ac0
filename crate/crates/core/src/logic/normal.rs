use super::Formula;

/// Rewrites every `forall y. f` as `!(exists y. !f)`. The result is
/// equivalent, has the same rank, and uses only existential quantifiers.
pub fn normalize(f: &Formula) -> Formula {
    match f {
        Formula::True
        | Formula::False
        | Formula::Edge(..)
        | Formula::Eq(..)
        | Formula::Color(..) => f.clone(),
        Formula::Not(a) => Formula::not(normalize(a)),
        Formula::And(a, b) => Formula::and(normalize(a), normalize(b)),
        Formula::Or(a, b) => Formula::or(normalize(a), normalize(b)),
        Formula::Exists(y, a) => Formula::exists(y, normalize(a)),
        Formula::Forall(y, a) => Formula::not(Formula::exists(y, Formula::not(normalize(a)))),
    }
}

/// The maximal existential subformulas of a normalized formula, i.e. the
/// `exists` nodes reachable through Boolean connectives only, deduplicated
/// in order of first appearance. Returned as `(bound variable, body)`.
pub fn existential_parts(f: &Formula) -> Vec<(String, Formula)> {
    let mut out: Vec<(String, Formula)> = Vec::new();
    collect(f, &mut out);
    out
}

fn collect(f: &Formula, out: &mut Vec<(String, Formula)>) {
    match f {
        Formula::Not(a) => collect(a, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect(a, out);
            collect(b, out);
        }
        Formula::Exists(y, body) => {
            let part = (y.clone(), (**body).clone());
            if !out.contains(&part) {
                out.push(part);
            }
        }
        Formula::Forall(..) => panic!("existential_parts expects a normalized formula"),
        _ => {}
    }
}

/// Restricts every quantifier to the color class `guard`: `exists y. f`
/// becomes `exists y. guard(y) & f` and `forall y. f` becomes
/// `forall y. !guard(y) | f`.
pub fn relativize(f: &Formula, guard: &str) -> Formula {
    match f {
        Formula::True
        | Formula::False
        | Formula::Edge(..)
        | Formula::Eq(..)
        | Formula::Color(..) => f.clone(),
        Formula::Not(a) => Formula::not(relativize(a, guard)),
        Formula::And(a, b) => Formula::and(relativize(a, guard), relativize(b, guard)),
        Formula::Or(a, b) => Formula::or(relativize(a, guard), relativize(b, guard)),
        Formula::Exists(y, a) => Formula::exists(
            y,
            Formula::and(Formula::color(guard, y), relativize(a, guard)),
        ),
        Formula::Forall(y, a) => Formula::forall(
            y,
            Formula::or(Formula::not(Formula::color(guard, y)), relativize(a, guard)),
        ),
    }
}
