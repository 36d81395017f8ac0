use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde_json::{json, Value};
use shrubkit::bush::{
    appendix_digraph, build_bush, check_first_separation, claim_a, decode_bush, one_label,
    wcol_bound, Bush,
};
use shrubkit::covers::{
    low_treedepth_cover_with_caps, shrubdepth_cover_with_caps, verify_cover_seeded,
};
use shrubkit::graph::{degeneracy, load_graph, treedepth_with_cap, write_graph};
use shrubkit::kernel::{kernelize, verify_kernel};
use shrubkit::logic::{interpret, parse_formula};
use shrubkit::quasibush::{
    build_separator_quasibush, check_splitter_properties, decode_quasibush, label_quasibush,
    quasibush_stats, QuasiBush,
};
use shrubkit::wcol::{
    check_universal_inequality_with_cap, exact_wcol_with_cap, heuristic_order, wcol_of_order,
    Inequality, Strategy,
};
use shrubkit::{ColoredGraph, DirectedGraph, Formula, VertexOrder};

use crate::failure::Failure;
use crate::{
    BuildArgs, CoverArgs, DecodeArgs, Format, FormulaIn, GraphIn, KernelArgs, Out, StatsArgs,
    VerifyArgs, WcolArgs,
};

/// Graphs at most this large get the universal inequality report from `wcol`.
const UNIVERSAL_REPORT_LIMIT: usize = 10;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn graph(path: &Path) -> Result<ColoredGraph, Failure> {
    Ok(load_graph(&read(path)?)?)
}

fn json_file(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn formula(f: &FormulaIn) -> Result<Formula, Failure> {
    let text = match (&f.formula, &f.formula_file) {
        (Some(t), _) => t.clone(),
        (None, Some(p)) => read(p)?,
        (None, None) => {
            return Err(Failure::usage(
                "one of --formula or --formula-file is required",
            ))
        }
    };
    Ok(parse_formula(text.trim())?)
}

/// `strategy:<name>`, an existing order file, or a comma-separated list.
fn order(arg: &str, g: &ColoredGraph) -> Result<VertexOrder, Failure> {
    let ord = if let Some(name) = arg.strip_prefix("strategy:") {
        heuristic_order(g, name.parse::<Strategy>()?)
    } else if Path::new(arg).is_file() {
        VertexOrder::parse(&read(Path::new(arg))?)?
    } else {
        VertexOrder::from_csv(arg)?
    };
    ord.check_size(g)?;
    Ok(ord)
}

fn load_input(input: &GraphIn) -> Result<(ColoredGraph, VertexOrder), Failure> {
    let g = graph(&input.graph)?;
    let ord = order(&input.order, &g)?;
    Ok((g, ord))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn format_of(out: &Out, default: Format, allowed: &[Format]) -> Result<Format, Failure> {
    let f = out.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(Failure::usage(format!(
            "--format {} is not available here",
            format_name(f)
        )))
    }
}

fn format_name(f: Format) -> &'static str {
    match f {
        Format::Json => "json",
        Format::Dot => "dot",
        Format::Text => "text",
    }
}

fn table(title: &str, rows: &[Inequality]) -> String {
    let mut s = format!("{title}\n");
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(0);
    for r in rows {
        let _ = writeln!(
            s,
            "  {:<width$}  {:>8} <= {:<12} {}",
            r.name,
            r.lhs,
            r.rhs,
            if r.holds { "ok" } else { "FAIL" }
        );
    }
    s
}

fn check_radius(r: usize) -> Result<(), Failure> {
    if r == 0 {
        return Err(Failure::usage("radius must be at least 1"));
    }
    Ok(())
}

/// Compares a decoded digraph with the interpretation of `phi`.
fn compare(decoded: &DirectedGraph, g: &ColoredGraph, phi: &Formula) -> Result<(), Failure> {
    let want = interpret(g, phi)?;
    if decoded.n != want.n {
        return Err(Failure::verify(
            "decode",
            format!(
                "decoded universe has {} vertices, graph has {}",
                decoded.n, want.n
            ),
            json!(null),
        ));
    }
    match decoded.first_difference(&want) {
        None => Ok(()),
        Some(((u, v), in_decoded)) => Err(Failure::verify(
            "decode",
            if in_decoded {
                format!("arc ({u}, {v}) is decoded but not defined by the formula")
            } else {
                format!("arc ({u}, {v}) is defined by the formula but not decoded")
            },
            json!({ "pair": [u, v], "decoded": in_decoded, "expected": !in_decoded }),
        )),
    }
}

pub fn wcol(a: &WcolArgs) -> Result<(), Failure> {
    let (g, ord) = load_input(&a.input)?;
    let fmt = format_of(&a.out, Format::Text, &[Format::Text, Format::Json])?;
    let mut rows = Vec::new();
    for &r in &a.radii {
        let value = wcol_of_order(&g, &ord, r);
        let heuristics: serde_json::Map<String, Value> = Strategy::ALL
            .iter()
            .map(|&s| {
                (
                    s.name().to_string(),
                    json!(wcol_of_order(&g, &heuristic_order(&g, s), r)),
                )
            })
            .collect();
        let exact = if a.exact {
            Some(exact_wcol_with_cap(&g, r, a.cap_exact_wcol)?.0)
        } else {
            None
        };
        let universal = if g.n() <= UNIVERSAL_REPORT_LIMIT.min(a.cap_exact_wcol) && r >= 1 {
            let u = check_universal_inequality_with_cap(&g, &ord, r, a.cap_exact_wcol)?;
            Some(
                json!({ "lhs": u.lhs, "wcol_2r": u.wcol_2r, "rhs": u.rhs.to_string(), "holds": u.holds }),
            )
        } else {
            None
        };
        rows.push(json!({ "r": r, "wcol": value, "heuristics": heuristics, "exact": exact, "universal": universal }));
    }
    let text = match fmt {
        Format::Json => pretty(&json!({ "n": g.n(), "order": ord.as_slice(), "radii": rows })),
        _ => {
            let mut s = String::new();
            for row in &rows {
                let r = &row["r"];
                let _ = writeln!(s, "wcol_{r} = {}", row["wcol"]);
                for (name, v) in row["heuristics"].as_object().into_iter().flatten() {
                    let _ = writeln!(s, "  {name}: {v}");
                }
                if !row["exact"].is_null() {
                    let _ = writeln!(s, "  exact: {}", row["exact"]);
                }
                if let Some(u) = row["universal"].as_object() {
                    let _ = writeln!(
                        s,
                        "  universal: {} <= {} ({})",
                        u["lhs"],
                        u["rhs"].as_str().unwrap_or_default(),
                        if u["holds"] == json!(true) {
                            "ok"
                        } else {
                            "FAIL"
                        }
                    );
                }
            }
            s
        }
    };
    emit(a.out.output.as_deref(), &text)
}

pub fn bush_build(a: &BuildArgs) -> Result<(), Failure> {
    let fmt = format_of(&a.out, Format::Json, &[Format::Json, Format::Dot])?;
    let (g, ord) = load_input(&a.input)?;
    let phi = formula(&a.formula)?;
    let b = build_bush(&g, &ord, a.r, a.q, &phi)?;
    let text = if fmt == Format::Dot {
        b.to_dot()
    } else {
        pretty(&b.to_json())
    };
    emit(a.out.output.as_deref(), &text)
}

fn load_bush(path: &Path) -> Result<Bush, Failure> {
    Ok(Bush::from_json(&json_file(path)?)?)
}

fn load_qbush(path: &Path) -> Result<QuasiBush, Failure> {
    Ok(QuasiBush::from_json(&json_file(path)?)?)
}

pub fn bush_decode(a: &DecodeArgs) -> Result<(), Failure> {
    format_of(&a.out, Format::Json, &[Format::Json])?;
    let d = decode_bush(&load_bush(&a.artifact)?)?;
    emit(a.out.output.as_deref(), &pretty(&d.to_json()))
}

pub fn bush_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let b = load_bush(&a.artifact)?;
    let g = graph(&a.graph)?;
    compare(&decode_bush(&b)?, &g, &formula(&a.formula)?)
}

pub fn bush_one_label(a: &DecodeArgs) -> Result<(), Failure> {
    let fmt = format_of(&a.out, Format::Json, &[Format::Json, Format::Dot])?;
    let ol = one_label(&load_bush(&a.artifact)?)?;
    let text = if fmt == Format::Dot {
        ol.bush.to_dot()
    } else {
        pretty(&ol.bush.to_json())
    };
    emit(a.out.output.as_deref(), &text)
}

pub fn bush_stats(a: &StatsArgs) -> Result<(), Failure> {
    check_radius(a.r)?;
    let fmt = format_of(&a.out, Format::Text, &[Format::Text, Format::Json])?;
    let (g, ord) = load_input(&a.input)?;
    let b = build_bush(&g, &ord, a.r, 1, &Formula::edge("x", "y"))?;
    let mut rows: Vec<Inequality> = [1, 2]
        .iter()
        .map(|&s| wcol_bound(&b, &g, &ord, a.r, s))
        .collect();
    rows.push(claim_a(&b, &g, &ord, a.r));
    let separation = check_first_separation(&b, &g, &ord, a.r);
    let appendix = appendix_digraph(&b, &g, &ord, a.r);
    let (outdeg, bound) = match &appendix {
        Ok(rep) => (rep.max_outdeg, rep.bound.to_string()),
        Err(_) => (0, String::new()),
    };
    let ok = rows.iter().all(|r| r.holds) && separation.is_ok() && appendix.is_ok();
    let text = match fmt {
        Format::Json => pretty(&json!({
            "r": a.r,
            "nodes": b.nodes.len(),
            "depth": b.depth,
            "info_arcs": b.info_arcs.len(),
            "inequalities": rows,
            "first_separation": separation.as_ref().err().map(ToString::to_string),
            "appendix": appendix.as_ref().map(|_| json!({ "max_outdeg": outdeg, "bound": bound })).unwrap_or_else(|e| json!({ "error": e.to_string() })),
            "holds": ok,
        })),
        _ => {
            let mut s = format!(
                "bush r={} nodes={} depth={} info_arcs={}\n",
                a.r,
                b.nodes.len(),
                b.depth,
                b.info_arcs.len()
            );
            s.push_str(&table("inequalities", &rows));
            let _ = writeln!(
                s,
                "first separation: {}",
                separation
                    .as_ref()
                    .map_or_else(ToString::to_string, |()| "ok".into())
            );
            match &appendix {
                Ok(_) => {
                    let _ = writeln!(s, "appendix out-degree: {outdeg} <= {bound} ok");
                }
                Err(e) => {
                    let _ = writeln!(s, "appendix out-degree: {e}");
                }
            }
            s
        }
    };
    emit(a.out.output.as_deref(), &text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::verify(
            "bush-stats",
            "a sparsity check failed",
            json!(null),
        ))
    }
}

pub fn qbush_build(a: &BuildArgs) -> Result<(), Failure> {
    check_radius(a.r)?;
    let fmt = format_of(&a.out, Format::Json, &[Format::Json, Format::Dot])?;
    let (g, ord) = load_input(&a.input)?;
    let phi = formula(&a.formula)?;
    let s = build_separator_quasibush(&g, &ord, a.r)?;
    let b = label_quasibush(&s, &g, &phi, a.q)?;
    let text = if fmt == Format::Dot {
        b.to_dot()
    } else {
        pretty(&b.to_json())
    };
    emit(a.out.output.as_deref(), &text)
}

pub fn qbush_separator(a: &StatsArgs) -> Result<(), Failure> {
    check_radius(a.r)?;
    format_of(&a.out, Format::Json, &[Format::Json])?;
    let (g, ord) = load_input(&a.input)?;
    let s = build_separator_quasibush(&g, &ord, a.r)?;
    emit(a.out.output.as_deref(), &pretty(&s.to_json()))
}

pub fn qbush_decode(a: &DecodeArgs) -> Result<(), Failure> {
    format_of(&a.out, Format::Json, &[Format::Json])?;
    let d = decode_quasibush(&load_qbush(&a.artifact)?)?;
    emit(a.out.output.as_deref(), &pretty(&d.to_json()))
}

pub fn qbush_verify(a: &VerifyArgs) -> Result<(), Failure> {
    let b = load_qbush(&a.artifact)?;
    let g = graph(&a.graph)?;
    compare(&decode_quasibush(&b)?, &g, &formula(&a.formula)?)
}

pub fn qbush_stats(a: &StatsArgs) -> Result<(), Failure> {
    check_radius(a.r)?;
    let fmt = format_of(&a.out, Format::Text, &[Format::Text, Format::Json])?;
    let (g, ord) = load_input(&a.input)?;
    let s = build_separator_quasibush(&g, &ord, a.r)?;
    let st = quasibush_stats(&s, &g, &ord);
    let sp = check_splitter_properties(&g, &ord, a.r, &s.traces);
    let ok = st.holds() && sp.holds();
    let text = match fmt {
        Format::Json => pretty(&json!({ "stats": st, "splitter": sp, "holds": ok })),
        _ => {
            let mut s = format!(
                "quasi-bush r={} nodes={} pointers={} depth={} max|M|={} max|alpha|={}\n",
                st.r, st.nodes, st.pointers, st.depth, st.max_m, st.max_alpha
            );
            s.push_str(&table("inequalities", &st.inequalities));
            let _ = writeln!(
                s,
                "representative adjacency violations: {}",
                st.rep_adjacency_violations
            );
            let _ = writeln!(
                s,
                "splitter: sources={} implications={} containment={} size={} implication={}",
                sp.sources,
                sp.implications_checked,
                sp.containment_violations,
                sp.size_violations,
                sp.implication_violations
            );
            s
        }
    };
    emit(a.out.output.as_deref(), &text)?;
    if ok {
        Ok(())
    } else {
        Err(Failure::verify(
            "qbush-stats",
            "a sparsity check failed",
            json!(sp.witness),
        ))
    }
}

pub fn kernel(a: &KernelArgs) -> Result<(), Failure> {
    let g = graph(&a.graph)?;
    let phi = formula(&a.formula)?;
    let target: BTreeSet<usize> = a.target.iter().copied().collect();
    if let Some(&v) = target.iter().find(|&&v| v >= g.n()) {
        return Err(shrubkit::Error::OutOfRange {
            vertex: v,
            n: g.n(),
        }
        .into());
    }
    let k = kernelize(&g, &target, &phi)?;
    let check = verify_kernel(&g, &k, &target, &phi)?;
    let mut ledger = k.ledger(target.len());
    ledger["kept"] = json!(k.kept);
    ledger["check"] = json!(check);
    let ledger_text = pretty(&ledger);
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("kernel.graph"), write_graph(&k.graph))?;
        fs::write(dir.join("kernel.formula"), format!("{}\n", k.formula))?;
        fs::write(dir.join("ledger.json"), &ledger_text)?;
    }
    emit(None, &ledger_text)?;
    if check.holds {
        Ok(())
    } else {
        Err(Failure::verify(
            "kernel",
            "kernel disagrees with the input on a target tuple",
            json!(check.witness),
        ))
    }
}

pub fn cover(a: &CoverArgs) -> Result<(), Failure> {
    format_of(&a.out, Format::Json, &[Format::Json])?;
    let (g, ord) = load_input(&a.input)?;
    let (family, shrub) = match &a.qbush {
        Some(path) => {
            let b = load_qbush(path)?;
            let (f, rep) = shrubdepth_cover_with_caps(&g, &b, a.p, a.cap_classes, a.cap_treedepth)?;
            (f, Some(rep))
        }
        None => (
            low_treedepth_cover_with_caps(&g, &ord, a.p, a.cap_classes, a.cap_treedepth)?,
            None,
        ),
    };
    let report = verify_cover_seeded(&g, &family, a.p, a.seed);
    let mut out = family.to_json(Some(&report));
    if let Some(s) = &shrub {
        out["stats"]["shrub"] = json!(s);
    }
    emit(a.out.output.as_deref(), &pretty(&out))?;
    if let Some(x) = &report.uncovered {
        return Err(Failure::verify(
            "cover",
            "vertex set not inside any class",
            json!(x),
        ));
    }
    if !report.bad_certificates.is_empty() {
        return Err(Failure::verify(
            "certificate",
            "treedepth certificate does not check out",
            json!(report.bad_certificates),
        ));
    }
    if let Some(s) = shrub.filter(|s| !s.holds()) {
        let bad: Vec<usize> = s
            .classes
            .iter()
            .enumerate()
            .filter(|(_, c)| !(c.treedepth_ok && c.decode_ok))
            .map(|(i, _)| i)
            .collect();
        return Err(Failure::verify(
            "shrub-class",
            "restricted quasi-bush certificate failed",
            json!(bad),
        ));
    }
    Ok(())
}

pub fn graph_dot(path: &Path) -> Result<(), Failure> {
    let g = graph(path)?;
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        let colors: Vec<&str> = g
            .colors()
            .iter()
            .filter(|(_, class)| class.contains(&v))
            .map(|(name, _)| name.as_str())
            .collect();
        if colors.is_empty() {
            let _ = writeln!(s, "  {v};");
        } else {
            let _ = writeln!(s, "  {v} [label=\"{v}: {}\"];", colors.join(","));
        }
    }
    for (u, v) in g.edges() {
        let _ = writeln!(s, "  {u} -- {v};");
    }
    s.push_str("}\n");
    emit(None, &s)
}

pub fn graph_info(path: &Path, cap: usize) -> Result<(), Failure> {
    let g = graph(path)?;
    let (td, _) = treedepth_with_cap(&g, cap)?;
    let colors: serde_json::Map<String, Value> = g
        .colors()
        .iter()
        .map(|(k, v)| (k.clone(), json!(v.len())))
        .collect();
    let info = json!({
        "n": g.n(),
        "edges": g.edge_count(),
        "max_degree": g.max_degree(),
        "degeneracy": degeneracy(&g),
        "components": g.components().len(),
        "treedepth": td,
        "colors": colors,
    });
    emit(None, &pretty(&info))
}

pub fn graph_interpret(path: &Path, f: &FormulaIn) -> Result<(), Failure> {
    let g = graph(path)?;
    let d = interpret(&g, &formula(f)?)?;
    emit(None, &pretty(&d.to_json()))
}
