//! Seeded random instance generators used by tests, benches and the CLI.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::ColoredGraph;
use crate::logic::Formula;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn relabel<R: Rng>(n: usize, edges: &[(usize, usize)], rng: &mut R) -> ColoredGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mapped: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
    ColoredGraph::from_edges(n, &mapped).expect("generated edges are simple")
}

/// Uniform random recursive tree on `n` vertices with shuffled ids.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> ColoredGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    relabel(n, &edges, rng)
}

/// A `w x h` grid with every edge subdivided `k` times.
pub fn subdivided_grid(w: usize, h: usize, k: usize) -> ColoredGraph {
    let id = |x: usize, y: usize| y * w + x;
    let mut base = Vec::new();
    for y in 0..h {
        for x in 0..w {
            if x + 1 < w {
                base.push((id(x, y), id(x + 1, y)));
            }
            if y + 1 < h {
                base.push((id(x, y), id(x, y + 1)));
            }
        }
    }
    let mut n = w * h;
    let mut edges = Vec::new();
    for (u, v) in base {
        let mut prev = u;
        for _ in 0..k {
            edges.push((prev, n));
            prev = n;
            n += 1;
        }
        edges.push((prev, v));
    }
    ColoredGraph::from_edges(n, &edges).expect("grid edges are simple")
}

/// Erdos-Renyi graph with edge probability `avg_degree / n`, dropping any
/// edge that would push an endpoint above `max_degree`.
pub fn bounded_degree<R: Rng>(
    n: usize,
    avg_degree: f64,
    max_degree: usize,
    rng: &mut R,
) -> ColoredGraph {
    let p = if n == 0 {
        0.0
    } else {
        (avg_degree / n as f64).min(1.0)
    };
    let mut deg = vec![0; n];
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) && deg[u] < max_degree && deg[v] < max_degree {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
            }
        }
    }
    ColoredGraph::from_edges(n, &edges).expect("generated edges are simple")
}

/// Uniform random graph on `n` vertices with edge probability `p`.
pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> ColoredGraph {
    bounded_degree(n, p * n as f64, usize::MAX, rng)
}

/// Puts each vertex into each named class independently with probability `p`.
pub fn add_random_colors<R: Rng>(g: &mut ColoredGraph, names: &[&str], p: f64, rng: &mut R) {
    for name in names {
        let members: Vec<usize> = (0..g.n()).filter(|_| rng.gen_bool(p)).collect();
        g.add_color(name, members).expect("members are in range");
    }
}

/// The instance families used by the test suites: random trees, subdivided
/// grids and bounded-degree random graphs, cycling with `i`.
pub fn family_instance<R: Rng>(i: usize, max_n: usize, rng: &mut R) -> (String, ColoredGraph) {
    let max_n = max_n.max(4);
    match i % 3 {
        0 => {
            let n = rng.gen_range(2..=max_n);
            (format!("tree{n}"), random_tree(n, rng))
        }
        1 => {
            let k = rng.gen_range(0..=2);
            let mut w = rng.gen_range(2..=4);
            let mut h = rng.gen_range(1..=3);
            // keep the subdivided grid within max_n
            while w * h + (w * (h - 1) + h * (w - 1)) * k > max_n && w * h > 2 {
                if w >= h {
                    w -= 1
                } else {
                    h -= 1
                }
            }
            (format!("grid{w}x{h}s{k}"), subdivided_grid(w, h, k))
        }
        _ => {
            let n = rng.gen_range(2..=max_n);
            (format!("gnp{n}"), bounded_degree(n, 2.5, 4, rng))
        }
    }
}

/// A random formula of quantifier rank at most `rank` whose free variables
/// are among `free`, using edges, equality and the given colors.
pub fn random_formula<R: Rng>(
    rng: &mut R,
    free: &[&str],
    rank: usize,
    colors: &[&str],
    size: usize,
) -> Formula {
    let vars: Vec<String> = free.iter().map(|v| v.to_string()).collect();
    gen_formula(rng, &vars, rank, colors, size, 0)
}

fn gen_formula<R: Rng>(
    rng: &mut R,
    vars: &[String],
    rank: usize,
    colors: &[&str],
    size: usize,
    fresh: usize,
) -> Formula {
    let pick = |rng: &mut R| vars[rng.gen_range(0..vars.len())].clone();
    let atom = |rng: &mut R| -> Formula {
        if vars.is_empty() {
            return if rng.gen_bool(0.5) {
                Formula::True
            } else {
                Formula::False
            };
        }
        match rng.gen_range(0..if colors.is_empty() { 2 } else { 3 }) {
            0 => Formula::Edge(pick(rng), pick(rng)),
            1 => Formula::Eq(pick(rng), pick(rng)),
            _ => Formula::Color(
                colors[rng.gen_range(0..colors.len())].to_string(),
                pick(rng),
            ),
        }
    };
    if size <= 1 {
        return atom(rng);
    }
    let choice = rng.gen_range(0..if rank > 0 { 5 } else { 3 });
    match choice {
        0 => Formula::not(gen_formula(rng, vars, rank, colors, size - 1, fresh)),
        1 | 2 => {
            let left = rng.gen_range(1..size);
            let a = gen_formula(rng, vars, rank, colors, left, fresh);
            let b = gen_formula(rng, vars, rank, colors, size - left, fresh + size);
            if choice == 1 {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        _ => {
            let y = format!("q{fresh}");
            let mut inner = vars.to_vec();
            inner.push(y.clone());
            let body = gen_formula(rng, &inner, rank - 1, colors, size - 1, fresh + 1);
            if choice == 3 {
                Formula::exists(&y, body)
            } else {
                Formula::forall(&y, body)
            }
        }
    }
}
