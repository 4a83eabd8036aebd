//! Density invariants and bias windows.
//!
//! Everything that is compared for equality is exact. The expected-count
//! functions are floating point because they only feed thresholds.

use num_rational::Ratio;
use thiserror::Error;

use crate::graph::{candidate_subgraphs, GraphError, Pattern, SubgraphProfile};

pub type Rational = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{0}")]
    Precondition(String),
}

fn precondition<T>(msg: impl Into<String>) -> Result<T, InvariantError> {
    Err(InvariantError::Precondition(msg.into()))
}

fn r(n: usize, d: usize) -> Rational {
    Rational::new(n as i64, d as i64)
}

fn check_cap(h: &Pattern) -> Result<(), InvariantError> {
    if h.vertex_count() > crate::graph::MAX_SUBGRAPH_ENUM_VERTICES {
        return Err(GraphError::EnumerationCap(h.vertex_count()).into());
    }
    Ok(())
}

/// Iterates `(vertex count, induced edge count)` over nonempty vertex subsets.
fn induced_profiles(h: &Pattern) -> impl Iterator<Item = (u64, usize, usize)> + '_ {
    (1..=h.full_mask()).map(move |m| (m, m.count_ones() as usize, h.induced_edge_count(m)))
}

/// m(H): the largest e'/v' over nonempty subgraphs.
pub fn max_density(h: &Pattern) -> Result<Rational, InvariantError> {
    if h.vertex_count() == 0 {
        return precondition("maximum density needs at least one vertex");
    }
    check_cap(h)?;
    Ok(induced_profiles(h).map(|(_, v, e)| r(e, v)).max().unwrap())
}

/// m2(H): the largest (e'-1)/(v'-2) over subgraphs on at least three vertices.
pub fn max_2_density(h: &Pattern) -> Result<Rational, InvariantError> {
    if h.vertex_count() < 3 {
        return precondition("maximum 2-density needs at least three vertices");
    }
    check_cap(h)?;
    Ok(induced_profiles(h)
        .filter(|&(_, v, _)| v >= 3)
        .map(|(_, v, e)| Rational::new(e as i64 - 1, v as i64 - 2))
        .max()
        .unwrap())
}

/// True iff m2(H) is attained by H itself.
///
/// Also evaluates the equivalent condition that every proper subgraph H'
/// with at least two edges has (v-v')/(e-e') <= (v-2)/(e-1), and panics if
/// the two disagree on a graph without isolated vertices.
pub fn is_m2_balanced(h: &Pattern) -> Result<bool, InvariantError> {
    let (v, e) = (h.vertex_count(), h.edge_count());
    if v < 3 || e < 2 {
        return precondition("m2-balance needs at least three vertices and two edges");
    }
    let own = Rational::new(e as i64 - 1, v as i64 - 2);
    let balanced = max_2_density(h)? == own;
    if h.isolated_vertices().is_empty() {
        let bound = r(v - 2, e - 1);
        let full = h.full_mask();
        // for a fixed vertex set the ratio grows with e', so induced subgraphs suffice
        let ratio_ok = induced_profiles(h)
            .filter(|&(m, _, es)| m != full && es >= 2)
            .all(|(_, vs, es)| r(v - vs, e - es) <= bound);
        assert_eq!(balanced, ratio_ok, "m2-balance characterizations disagree on {h:?}");
    }
    Ok(balanced)
}

fn g1_from(h: &Pattern, profiles: &[SubgraphProfile]) -> Rational {
    let (v, e) = (h.vertex_count(), h.edge_count());
    profiles
        .iter()
        .filter(|p| !p.clique)
        .filter(|p| (p.edges >= 2 && p.edges < e) || (p.edges == 0 && p.vertices == 2))
        .map(|p| r(v - p.vertices, e - p.edges))
        .max()
        .expect("the two-vertex empty graph is always a candidate")
}

fn g2_from(h: &Pattern, profiles: &[SubgraphProfile]) -> Rational {
    let (v, e) = (h.vertex_count(), h.edge_count());
    profiles
        .iter()
        .filter(|p| p.edges >= 2 && p.clique && (p.edges < e || p.vertices < v))
        .map(|p| r(p.vertices - 2, p.edges - 1))
        .chain(std::iter::once(r(v - 2, e - 1)))
        .min()
        .unwrap()
}

pub fn g1(h: &Pattern) -> Result<Rational, InvariantError> {
    if h.edge_count() < 2 {
        return precondition("g1 needs at least two edges");
    }
    Ok(g1_from(h, &candidate_subgraphs(h)?))
}

pub fn g2(h: &Pattern) -> Result<Rational, InvariantError> {
    if h.edge_count() < 2 {
        return precondition("g2 needs at least two edges");
    }
    Ok(g2_from(h, &candidate_subgraphs(h)?))
}

/// n^{v'} p^{e'}: expected canonical copies of a subgraph in the random blow-up.
pub fn expected_canonical_copies(h_sub: &Pattern, n: usize, p: f64) -> f64 {
    expected_from_counts(h_sub.vertex_count(), h_sub.edge_count(), n, p)
}

fn expected_from_counts(v: usize, e: usize, n: usize, p: f64) -> f64 {
    (n as f64).powi(v as i32) * p.powi(e as i32)
}

fn check_p(p: f64) -> Result<(), InvariantError> {
    if !(p > 0.0 && p <= 1.0) {
        return precondition(format!("edge probability {p} outside (0, 1]"));
    }
    Ok(())
}

/// min n^{v'} p^{e'} over subgraphs with at least one edge.
pub fn f_hat(h: &Pattern, n: usize, p: f64) -> Result<f64, InvariantError> {
    if h.edge_count() < 1 {
        return precondition("f_hat needs at least one edge");
    }
    check_p(p)?;
    check_cap(h)?;
    Ok(induced_profiles(h)
        .filter(|&(_, _, e)| e >= 1)
        .map(|(_, v, e)| expected_from_counts(v, e, n, p))
        .fold(f64::INFINITY, f64::min))
}

/// min n^{v'} p^{e'} over non-clique subgraphs with at least two edges and H itself.
pub fn f_lower(h: &Pattern, n: usize, p: f64) -> Result<f64, InvariantError> {
    if h.edge_count() < 2 {
        return precondition("f needs at least two edges");
    }
    check_p(p)?;
    check_cap(h)?;
    let full = h.full_mask();
    let mut best = f64::INFINITY;
    for (m, v, e) in induced_profiles(h) {
        let clique = e == v * (v - 1) / 2;
        // densest admissible edge count on this vertex set
        let admissible = if m == full || !clique {
            Some(e)
        } else if e >= 3 {
            Some(e - 1)
        } else {
            None
        };
        if let Some(ea) = admissible.filter(|&x| x >= 2) {
            best = best.min(expected_from_counts(v, ea, n, p));
        }
    }
    Ok(best)
}

/// K_k with its first `i` matching edges removed, together with those edges.
///
/// The first matching is {0,1}, {2,3}, ... ; the second one is {1,2}, {3,4}, ...
pub fn clique_minus_matching_edges(k: usize, i: usize) -> Result<(Pattern, Vec<(usize, usize)>), InvariantError> {
    if k < 3 || i < 1 || i > k - 2 {
        return precondition(format!("need k >= 3 and 1 <= i <= k-2, got k={k}, i={i}"));
    }
    let half = k / 2;
    let mut removed: Vec<(usize, usize)> = (1..=half).map(|j| (2 * j - 2, 2 * j - 1)).collect();
    removed.extend((1..=k - 2 - half).map(|m| (2 * m - 1, 2 * m)));
    removed.truncate(i);
    Ok((Pattern::complete(k).without_edges(&removed), removed))
}

pub fn clique_minus_matching(k: usize, i: usize) -> Result<Pattern, InvariantError> {
    clique_minus_matching_edges(k, i).map(|(p, _)| p)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Dense,
    G1G2,
    M2Balanced,
}

impl std::str::FromStr for Regime {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dense" => Ok(Regime::Dense),
            "g1g2" => Ok(Regime::G1G2),
            "m2balanced" => Ok(Regime::M2Balanced),
            other => Err(format!("unknown regime {other:?}")),
        }
    }
}

/// How the window constants are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum WindowConstants {
    /// Free knobs; `c` is the dense upper constant.
    Knobs { c: f64, c1: f64, c2: f64 },
    /// The values used inside the existence proofs, given alpha and delta.
    ProofGiven { delta: f64 },
}

impl Default for WindowConstants {
    fn default() -> Self {
        WindowConstants::Knobs { c: 1.0, c1: 1.0, c2: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiasWindow {
    pub regime: Regime,
    pub lower: f64,
    pub upper: f64,
    /// Round budget for the supplied bias.
    pub rounds: u64,
}

impl BiasWindow {
    pub fn contains(&self, b: u64) -> bool {
        let x = (b + 1) as f64;
        self.lower <= x && x <= self.upper
    }

    pub fn is_empty(&self) -> bool {
        self.lower > self.upper
    }
}

/// floor((1-alpha) e(H) s^2 / (b+1)).
pub fn round_budget(h: &Pattern, s: usize, b: u64, alpha: f64) -> u64 {
    ((1.0 - alpha) * h.edge_count() as f64 * (s as f64).powi(2) / (b + 1) as f64).floor() as u64
}

/// The interval for b+1 in which the regime's strategy applies at part size `s`.
pub fn bias_window(
    h: &Pattern,
    s: usize,
    b: u64,
    regime: Regime,
    alpha: f64,
    constants: WindowConstants,
) -> Result<BiasWindow, InvariantError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return precondition(format!("alpha {alpha} outside (0, 1)"));
    }
    let e = h.edge_count() as f64;
    let sf = s as f64;
    let (lower, upper) = match regime {
        Regime::Dense => {
            if h.edge_count() < 2 || h.vertex_count() < 3 {
                return precondition("dense regime needs at least two edges");
            }
            let c = match constants {
                WindowConstants::Knobs { c, .. } => c,
                WindowConstants::ProofGiven { .. } => (1.0 - alpha) / 2.0,
            };
            let m2 = max_2_density(h)?;
            (2.0, c * sf.powf(1.0 / ratio_f64(m2)))
        }
        Regime::G1G2 => {
            if h.edge_count() < 3 || !h.contains_cherry() {
                return precondition("g1/g2 regime needs at least three edges and a path on three vertices");
            }
            let (c1, c2) = match constants {
                WindowConstants::Knobs { c1, c2, .. } => (c1, c2),
                WindowConstants::ProofGiven { delta } => ((1.0 - alpha) * e / delta, (1.0 - alpha) * e / 2.0),
            };
            (c1 * sf.powf(ratio_f64(g1(h)?)), c2 * sf.powf(ratio_f64(g2(h)?)))
        }
        Regime::M2Balanced => {
            if h.edge_count() < 2 || !is_m2_balanced(h)? || h.is_forest() {
                return precondition("m2-balanced regime needs an m2-balanced graph with a cycle");
            }
            let (c1, c2) = match constants {
                WindowConstants::Knobs { c1, c2, .. } => (c1, c2),
                WindowConstants::ProofGiven { .. } => ((1.0 - alpha) * e, 2.0 * (1.0 - alpha) * e),
            };
            let x = sf.powf(1.0 / ratio_f64(max_2_density(h)?));
            (c1 * x, c2 * x)
        }
    };
    Ok(BiasWindow { regime, lower, upper, rounds: round_budget(h, s, b, alpha) })
}

pub fn ratio_f64(x: Rational) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// All four densities for display.
#[derive(Clone, Debug)]
pub struct InvariantSummary {
    pub m: Option<Rational>,
    pub m2: Option<Rational>,
    pub m2_balanced: Option<bool>,
    pub g1: Option<Rational>,
    pub g2: Option<Rational>,
}

pub fn summarize(h: &Pattern) -> Result<InvariantSummary, InvariantError> {
    check_cap(h)?;
    Ok(InvariantSummary {
        m: max_density(h).ok(),
        m2: max_2_density(h).ok(),
        m2_balanced: is_m2_balanced(h).ok(),
        g1: g1(h).ok(),
        g2: g2(h).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::all_subgraph_profiles;

    fn binom2(k: usize) -> usize {
        k * (k - 1) / 2
    }

    /// Every graph on `v` labeled vertices.
    fn all_graphs(v: usize) -> Vec<Pattern> {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a + 1..v).map(move |b| (a, b))).collect();
        (0u32..1 << pairs.len())
            .map(|mask| {
                let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
                Pattern::new(v, &edges).unwrap()
            })
            .collect()
    }

    fn brute_g1(h: &Pattern) -> Rational {
        let (v, e) = (h.vertex_count(), h.edge_count());
        all_subgraph_profiles(h)
            .into_iter()
            .filter(|&(_, p, whole)| whole || !p.clique)
            .filter(|&(_, p, _)| (p.edges >= 2 && p.edges < e) || (p.edges == 0 && p.vertices == 2))
            .map(|(_, p, _)| r(v - p.vertices, e - p.edges))
            .max()
            .unwrap()
    }

    fn brute_g2(h: &Pattern) -> Rational {
        all_subgraph_profiles(h)
            .into_iter()
            .filter(|&(_, p, whole)| p.edges >= 2 && (p.clique || whole))
            .map(|(_, p, _)| r(p.vertices - 2, p.edges - 1))
            .min()
            .unwrap()
    }

    fn brute_m2(h: &Pattern) -> Rational {
        all_subgraph_profiles(h)
            .into_iter()
            .filter(|&(_, p, _)| p.vertices >= 3)
            .map(|(_, p, _)| Rational::new(p.edges as i64 - 1, p.vertices as i64 - 2))
            .max()
            .unwrap()
    }

    fn brute_m(h: &Pattern) -> Rational {
        all_subgraph_profiles(h).into_iter().map(|(_, p, _)| r(p.edges, p.vertices)).max().unwrap()
    }

    #[test]
    fn clique_closed_forms() {
        for k in 3..=8 {
            let kk = Pattern::complete(k);
            assert_eq!(max_density(&kk).unwrap(), r(k - 1, 2));
            assert_eq!(max_2_density(&kk).unwrap(), r(binom2(k) - 1, k - 2));
            assert!(is_m2_balanced(&kk).unwrap());
        }
        assert_eq!(max_density(&Pattern::complete(2)).unwrap(), r(1, 2));
        assert_eq!(max_density(&Pattern::path(3)).unwrap(), r(2, 3));
        assert_eq!(max_2_density(&Pattern::star(4)).unwrap(), r(1, 1));
        assert!(max_2_density(&Pattern::complete(2)).is_err());
    }

    #[test]
    fn reduced_enumeration_matches_brute_force() {
        for v in 1..=5 {
            for h in all_graphs(v) {
                assert_eq!(max_density(&h).unwrap(), brute_m(&h), "{h:?}");
                if v >= 3 {
                    assert_eq!(max_2_density(&h).unwrap(), brute_m2(&h), "{h:?}");
                }
                if h.edge_count() >= 2 {
                    assert_eq!(g1(&h).unwrap(), brute_g1(&h), "{h:?}");
                    assert_eq!(g2(&h).unwrap(), brute_g2(&h), "{h:?}");
                }
            }
        }
    }

    #[test]
    fn profile_closure_for_k4_minus_edge() {
        // every (v', e', clique) achievable by some subgraph that can be extremal
        // for a fixed vertex set shows up in the reduced list
        let h = Pattern::complete(4).without_edges(&[(0, 1)]);
        let reduced = candidate_subgraphs(&h).unwrap();
        let brute = all_subgraph_profiles(&h);
        for p in &reduced {
            assert!(brute.iter().any(|(_, q, _)| q == p), "{p:?} is not a real subgraph profile");
        }
        let full = all_graphs(4);
        assert_eq!(g1(&h).unwrap(), brute_g1(&h));
        assert_eq!(g2(&h).unwrap(), brute_g2(&h));
        assert!(full.len() == 64);
    }

    #[test]
    fn m2_balance_examples() {
        let h3 = clique_minus_matching(5, 3).unwrap();
        assert!(is_m2_balanced(&h3).unwrap());
        let pendant = Pattern::parse("0 1\n1 2\n0 2\n2 3").unwrap();
        assert!(!is_m2_balanced(&pendant).unwrap());
        assert_eq!(max_2_density(&pendant).unwrap(), r(2, 1));
        for v in 3..=6 {
            for h in all_graphs(v) {
                if h.edge_count() >= 2 {
                    let balanced = is_m2_balanced(&h).unwrap();
                    assert_eq!(balanced, brute_m2(&h) == Rational::new(h.edge_count() as i64 - 1, v as i64 - 2));
                }
            }
        }
    }

    #[test]
    fn clique_minus_matching_closed_forms() {
        for k in 3..=8 {
            for i in 1..=k - 2 {
                let h = clique_minus_matching(k, i).unwrap();
                assert_eq!(h.edge_count(), binom2(k) - i);
                if (k, i) == (5, 3) {
                    assert_eq!(g1(&h).unwrap(), r(1, 2));
                } else {
                    assert_eq!(g1(&h).unwrap(), r(k - 2, binom2(k) - i), "k={k} i={i}");
                }
                assert_eq!(g2(&h).unwrap(), r(k - 2, binom2(k) - i - 1), "k={k} i={i}");
            }
        }
        let (h, removed) = clique_minus_matching_edges(5, 3).unwrap();
        assert_eq!(removed, vec![(0, 1), (2, 3), (1, 2)]);
        // the witness of the exception: K4 minus an edge on {0,2,3,4}
        assert_eq!(h.induced_edge_count(0b11101), 5);
        assert_eq!(g2(&h).unwrap(), Rational::new(1, 1) / max_2_density(&h).unwrap());
        let h62 = clique_minus_matching(6, 2).unwrap();
        assert_eq!((h62.vertex_count(), h62.edge_count()), (6, 13));
        assert_eq!(g1(&h62).unwrap(), r(4, 13));
        assert_eq!(g2(&h62).unwrap(), r(4, 12));
        assert!(clique_minus_matching(5, 4).is_err());
        assert!(clique_minus_matching(2, 1).is_err());
    }

    #[test]
    fn matching_labeling_does_not_matter() {
        // a different pair of disjoint matchings gives the same invariants
        let k = 6;
        let alt = Pattern::complete(k).without_edges(&[(4, 5), (0, 3), (1, 4)]);
        let std = clique_minus_matching(k, 3).unwrap();
        assert_eq!(g1(&alt).unwrap(), g1(&std).unwrap());
        assert_eq!(g2(&alt).unwrap(), g2(&std).unwrap());
        assert_eq!(max_2_density(&alt).unwrap(), max_2_density(&std).unwrap());
    }

    #[test]
    fn lemma_implications_on_small_graphs() {
        for v in 3..=6 {
            for h in all_graphs(v) {
                // the implications are stated for graphs without isolated vertices
                if h.edge_count() < 2 || !h.isolated_vertices().is_empty() {
                    continue;
                }
                let (a, b) = (g1(&h).unwrap(), g2(&h).unwrap());
                if a <= b {
                    assert_eq!(b, Rational::new(1, 1) / max_2_density(&h).unwrap(), "{h:?}");
                }
                let connected_witness = (1..h.full_mask()).any(|m| {
                    let sub = h.relabeled(&(0..v).filter(|&x| m >> x & 1 == 1).collect::<Vec<_>>());
                    let es = sub.edge_count();
                    es >= 2 && es < h.edge_count() && !sub.is_complete() && sub.strip_isolated().is_connected()
                        && sub.isolated_vertices().is_empty()
                });
                if a < b && connected_witness {
                    assert!(b < Rational::new(1, 1), "{h:?}");
                }
            }
        }
    }

    #[test]
    fn expected_counts() {
        assert!((expected_canonical_copies(&Pattern::complete(2), 10, 0.1) - 10.0).abs() < 1e-9);
        assert_eq!(expected_canonical_copies(&Pattern::complete(3), 10, 0.0), 0.0);
        assert!((expected_canonical_copies(&Pattern::complete(3), 10, 0.5) - 125.0).abs() < 1e-9);
    }

    #[test]
    fn f_hat_and_f_lower() {
        let k3 = Pattern::complete(3);
        assert!((f_hat(&k3, 100, 0.2).unwrap() - 2000.0).abs() < 1e-6);
        let tiny = f_hat(&k3, 100, 1e-3).unwrap();
        assert!((tiny - 1e-3).abs() < 1e-12);
        assert!(tiny < 100.0 * 100.0 * 1e-3);
        for h in [k3.clone(), Pattern::path(4), clique_minus_matching(5, 2).unwrap()] {
            for &(n, p) in &[(10, 0.5), (100, 0.01), (50, 0.3)] {
                assert!(f_lower(&h, n, p).unwrap() >= f_hat(&h, n, p).unwrap());
            }
        }
        assert!(f_hat(&k3, 10, 0.0).is_err());
    }

    #[test]
    fn f_lower_matches_brute_force() {
        for v in 3..=5 {
            for h in all_graphs(v) {
                if h.edge_count() < 2 {
                    continue;
                }
                for &(n, p) in &[(7usize, 0.3), (40, 0.05)] {
                    let brute = all_subgraph_profiles(&h)
                        .into_iter()
                        .filter(|&(_, q, whole)| q.edges >= 2 && (whole || !q.clique))
                        .map(|(_, q, _)| expected_from_counts(q.vertices, q.edges, n, p))
                        .fold(f64::INFINITY, f64::min);
                    let got = f_lower(&h, n, p).unwrap();
                    assert!((got - brute).abs() <= 1e-9 * brute.max(1.0), "{h:?}");
                }
            }
        }
    }

    #[test]
    fn f_lower_bounds_inside_windows() {
        for h in [Pattern::complete(4).without_edges(&[(0, 1)]), clique_minus_matching(5, 3).unwrap()] {
            let (v, e) = (h.vertex_count() as i32, h.edge_count() as i32);
            let g1v = ratio_f64(g1(&h).unwrap());
            let m2 = ratio_f64(max_2_density(&h).unwrap());
            let balanced = is_m2_balanced(&h).unwrap();
            for c0 in [0.5, 1.0] {
                for s in [20usize, 100, 1000] {
                    for frac in [0.01, 0.3, 1.0] {
                        let p = (frac * s_pow(s, -g1v) / c0).min(1.0);
                        let bound = c0f(c0, e) * (s as f64).powi(v) * p.powi(e);
                        assert!(f_lower(&h, s, p).unwrap() >= bound * (1.0 - 1e-9));
                        if balanced {
                            let p = (frac * s_pow(s, -1.0 / m2) / c0).min(1.0);
                            let bound = c0f(c0, e) * (s as f64).powi(v) * p.powi(e);
                            assert!(f_lower(&h, s, p).unwrap() >= bound * (1.0 - 1e-9));
                        }
                    }
                }
            }
        }
    }

    fn s_pow(s: usize, x: f64) -> f64 {
        (s as f64).powf(x)
    }

    fn c0f(c0: f64, e: i32) -> f64 {
        c0.powi(e)
    }

    #[test]
    fn windows() {
        let k3 = Pattern::complete(3);
        let w = bias_window(&k3, 100, 1, Regime::Dense, 0.5, WindowConstants::default()).unwrap();
        assert_eq!((w.lower, w.upper), (2.0, 10.0));
        let h2 = clique_minus_matching(6, 2).unwrap();
        let w = bias_window(&h2, 4096, 1, Regime::G1G2, 0.5, WindowConstants::default()).unwrap();
        assert!((w.lower - 2f64.powf(48.0 / 13.0)).abs() < 1e-9);
        assert!((w.upper - 16.0).abs() < 1e-9);
        let s = 10;
        let w = bias_window(&k3, s, 1, Regime::Dense, 0.5, WindowConstants::default()).unwrap();
        assert_eq!(w.rounds, (3 * s * s / 4) as u64);
        assert!(bias_window(&Pattern::path(3), 10, 1, Regime::G1G2, 0.5, WindowConstants::default()).is_err());
        assert!(bias_window(&Pattern::path(4), 10, 1, Regime::M2Balanced, 0.5, WindowConstants::default()).is_err());
        let proof = bias_window(&k3, 100, 1, Regime::M2Balanced, 0.5, WindowConstants::ProofGiven { delta: 0.1 }).unwrap();
        assert!((proof.lower - 1.5 * 10.0).abs() < 1e-9 && (proof.upper - 3.0 * 10.0).abs() < 1e-9);
    }
}
