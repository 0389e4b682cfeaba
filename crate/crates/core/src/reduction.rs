//! Orbit reduction of total Hilbert classes under the moduli
//! isomorphisms: bounded breadth-first minimization, terminal-form
//! classification, and realizable traces.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use num_integer::Integer;

use crate::error::Error;
use crate::invariants::HilbertClass;
use crate::transforms::TransformSymbol;
use crate::Result;

/// Canonical orbit representative: the degree is reduced modulo the rank,
/// and torsion states carry positive length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitState {
    r: i64,
    d: i64,
}

impl OrbitState {
    /// Normalizes (r, d) into canonical form.
    pub fn canonical(r: i64, d: i64) -> Result<Self> {
        if r < 0 || (r == 0 && d <= 0) {
            return Err(Error::InvalidClass { r, d });
        }
        let d = if r > 0 { d.rem_euclid(r) } else { d };
        Ok(OrbitState { r, d })
    }

    /// Canonical state of a class, negating classes of shifted complexes
    /// first so replayed traces land on the same representative.
    pub fn of_class(hc: HilbertClass) -> Result<Self> {
        let hc = if hc.r < 0 || (hc.r == 0 && hc.d < 0) {
            -hc
        } else {
            hc
        };
        Self::canonical(hc.r, hc.d)
    }

    pub fn r(&self) -> i64 {
        self.r
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn class(&self) -> HilbertClass {
        HilbertClass::new(self.r, self.d)
    }
}

impl fmt::Display for OrbitState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.d)
    }
}

/// Outcome of a bounded reduction run.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    /// Smallest reachable state, ordered by rank then degree.
    pub terminal: OrbitState,
    /// Move sequence from the input class to the terminal; replaying it
    /// through the total action reproduces the terminal up to translation
    /// normalization and overall sign.
    pub trace: Vec<TransformSymbol>,
    /// Number of distinct states encountered.
    pub visited: usize,
    /// True when the exploration bound pruned anything; searches from any
    /// positive-rank state always prune, since the move family is infinite.
    pub capped: bool,
}

fn check_h(h: i64) -> Result<()> {
    if h < 1 {
        return Err(Error::InvalidParameter(format!(
            "polarization degree must be positive, got {h}"
        )));
    }
    Ok(())
}

fn check_cap(cap: i64) -> Result<()> {
    if cap < 1 {
        return Err(Error::InvalidParameter(format!(
            "cap must be positive, got {cap}"
        )));
    }
    Ok(())
}

/// Exploration bound used when the caller does not supply one: generous
/// enough that every rank-decreasing move from the input stays in range.
pub fn default_cap(hc: HilbertClass, h: i64) -> i64 {
    hc.r.abs() * h + hc.d.abs() * h + h
}

/// Moves out of a positive-rank state, as (target, move value) pairs in
/// increasing move-value order. Each value v congruent to dh - r modulo
/// rh with |v| <= cap yields one reachable state; the sign of v selects
/// between the two reflection directions, and v = 0 lands on torsion.
pub fn successor_edges(s: OrbitState, h: i64, cap: i64) -> Result<Vec<(OrbitState, i64)>> {
    check_h(h)?;
    check_cap(cap)?;
    if s.r == 0 {
        return Err(Error::TorsionState);
    }
    let (r, d) = (s.r, s.d);
    let modulus = r * h;
    let m = (d * h - r).rem_euclid(modulus);
    let k_max = Integer::div_floor(&(m + cap), &modulus);
    let mut v = m - k_max * modulus;
    let mut out = Vec::new();
    while v <= cap {
        debug_assert_eq!((v + r).rem_euclid(h), 0);
        let dv = (v + r) / h;
        let target = if v > 0 {
            Some(OrbitState::canonical(v, -dv)?)
        } else if v < 0 {
            Some(OrbitState::canonical(-v, dv)?)
        } else if dv > 0 {
            Some(OrbitState { r: 0, d: dv })
        } else {
            None
        };
        if let Some(t) = target {
            out.push((t, v));
        }
        v += modulus;
    }
    Ok(out)
}

/// Distinct successor states, sorted.
pub fn successors(s: OrbitState, h: i64, cap: i64) -> Result<Vec<OrbitState>> {
    let mut out: Vec<OrbitState> = successor_edges(s, h, cap)?
        .into_iter()
        .map(|(t, _)| t)
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

struct Exploration {
    states: Vec<OrbitState>,
    edges: Vec<(OrbitState, i64, OrbitState)>,
    parents: HashMap<OrbitState, (OrbitState, i64)>,
    capped: bool,
}

fn explore(start: OrbitState, h: i64, cap: i64) -> Result<Exploration> {
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut edges = Vec::new();
    let mut parents = HashMap::new();
    let mut capped = false;
    while let Some(s) = queue.pop_front() {
        if s.r == 0 {
            continue;
        }
        capped = true;
        for (t, v) in successor_edges(s, h, cap)? {
            edges.push((s, v, t));
            if seen.insert(t) {
                parents.insert(t, (s, v));
                queue.push_back(t);
            }
        }
    }
    let mut states: Vec<OrbitState> = seen.into_iter().collect();
    states.sort();
    Ok(Exploration {
        states,
        edges,
        parents,
        capped,
    })
}

/// Rewrites a path of (source state, move value) edges into transform
/// symbols acting on the actual input class. The running class may differ
/// from the state by a translation and a global sign; both are tracked.
fn realize_trace(path: &[(OrbitState, i64)], input: HilbertClass, h: i64) -> Vec<TransformSymbol> {
    let mut class = input;
    let mut trace = Vec::new();
    for &(src, v) in path {
        debug_assert_eq!(class.r.abs(), src.r);
        let dv = (v + src.r) / h;
        let target_d = if class.r > 0 { dv } else { -dv };
        debug_assert_eq!((target_d - class.d).rem_euclid(class.r.abs()), 0);
        let t = (target_d - class.d) / class.r;
        let (symbol, count) = if t >= 0 {
            (TransformSymbol::Psi, t)
        } else {
            (TransformSymbol::PsiHat, -t)
        };
        trace.extend(std::iter::repeat(symbol).take(count as usize));
        class = HilbertClass::new(target_d * h - class.r, -target_d);
        trace.push(TransformSymbol::Phi);
    }
    trace
}

/// Bounded breadth-first minimization of a sheaf class. The terminal is
/// the lexicographically smallest reachable state; `trace` realizes it
/// from the input.
pub fn reduce(hc: HilbertClass, h: i64, cap: i64) -> Result<ReductionResult> {
    check_h(h)?;
    check_cap(cap)?;
    if !hc.is_sheaf_class() {
        return Err(Error::InvalidClass { r: hc.r, d: hc.d });
    }
    let start = OrbitState::canonical(hc.r, hc.d)?;
    let exploration = explore(start, h, cap)?;
    let terminal = *exploration.states.first().expect("start state is present");
    let mut path = Vec::new();
    let mut cursor = terminal;
    while cursor != start {
        let &(parent, v) = exploration
            .parents
            .get(&cursor)
            .expect("every non-start state has a parent");
        path.push((parent, v));
        cursor = parent;
    }
    path.reverse();
    let trace = realize_trace(&path, hc, h);
    Ok(ReductionResult {
        terminal,
        trace,
        visited: exploration.states.len(),
        capped: exploration.capped,
    })
}

/// Whether a state matches one of the closed forms that reduction aims
/// for. Necessary for minimality, not sufficient: a state can match and
/// still reduce further.
pub fn is_terminal_form(s: OrbitState, h: i64) -> bool {
    if s.r == 0 {
        return s.d > 0;
    }
    if s.d == 0 {
        return h != 1;
    }
    s.d < s.r && 2 * s.r <= s.d * h
}

/// Every state reachable under the cap, sorted.
pub fn orbit(hc: HilbertClass, h: i64, cap: i64) -> Result<Vec<OrbitState>> {
    check_h(h)?;
    check_cap(cap)?;
    if !hc.is_sheaf_class() {
        return Err(Error::InvalidClass { r: hc.r, d: hc.d });
    }
    let start = OrbitState::canonical(hc.r, hc.d)?;
    Ok(explore(start, h, cap)?.states)
}

/// The full move graph under the cap, as (source, move value, target)
/// triples in breadth-first discovery order.
pub fn orbit_edges(hc: HilbertClass, h: i64, cap: i64) -> Result<Vec<(OrbitState, i64, OrbitState)>> {
    check_h(h)?;
    check_cap(cap)?;
    if !hc.is_sheaf_class() {
        return Err(Error::InvalidClass { r: hc.r, d: hc.d });
    }
    let start = OrbitState::canonical(hc.r, hc.d)?;
    Ok(explore(start, h, cap)?.edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::compose_total;
    use num_integer::gcd;

    fn hc(r: i64, d: i64) -> HilbertClass {
        HilbertClass::new(r, d)
    }

    fn st(r: i64, d: i64) -> OrbitState {
        OrbitState::canonical(r, d).unwrap()
    }

    #[test]
    fn canonical_normalizes() {
        assert_eq!(st(3, -2), st(3, 1));
        assert_eq!(st(3, 7), st(3, 1));
        assert_eq!(st(0, 4).d(), 4);
        assert!(OrbitState::canonical(-1, 0).is_err());
        assert!(OrbitState::canonical(0, 0).is_err());
        assert!(OrbitState::canonical(0, -3).is_err());
    }

    #[test]
    fn of_class_negates_complex_classes() {
        assert_eq!(OrbitState::of_class(hc(-3, 2)).unwrap(), st(3, -2));
        assert_eq!(OrbitState::of_class(hc(0, -5)).unwrap(), st(0, 5));
        assert_eq!(OrbitState::of_class(hc(2, 9)).unwrap(), st(2, 1));
        assert!(OrbitState::of_class(hc(0, 0)).is_err());
    }

    #[test]
    fn successor_set_at_cap_twelve() {
        let got = successors(st(3, 2), 3, 12).unwrap();
        assert_eq!(got, vec![st(3, 1), st(6, 5), st(12, 7)]);
    }

    #[test]
    fn successors_reach_torsion() {
        assert!(successors(st(3, 1), 3, 20).unwrap().contains(&st(0, 1)));
        for r in 1..=8 {
            let got = successors(st(r, 0), 1, default_cap(hc(r, 0), 1)).unwrap();
            assert!(got.contains(&st(0, r)), "missing (0,{r})");
        }
    }

    #[test]
    fn successors_reject_torsion_sources() {
        assert!(matches!(
            successors(st(0, 3), 2, 10),
            Err(Error::TorsionState)
        ));
    }

    #[test]
    fn reduce_examples() {
        let res = reduce(hc(6, 4), 1, default_cap(hc(6, 4), 1)).unwrap();
        assert_eq!(res.terminal, st(0, 2));
        let res = reduce(hc(3, 2), 3, default_cap(hc(3, 2), 3)).unwrap();
        assert_eq!(res.terminal, st(0, 1));
        let res = reduce(hc(5, 0), 2, default_cap(hc(5, 0), 2)).unwrap();
        assert_eq!(res.terminal, st(5, 0));
        assert!(res.capped);
        for h in [1, 2, 5] {
            let res = reduce(hc(0, 7), h, 10).unwrap();
            assert_eq!(res.terminal, st(0, 7));
            assert!(res.trace.is_empty());
            assert!(!res.capped);
            assert_eq!(res.visited, 1);
        }
    }

    #[test]
    fn reduce_rejects_invalid_classes() {
        assert!(reduce(hc(-1, 3), 1, 10).is_err());
        assert!(reduce(hc(0, 0), 1, 10).is_err());
        assert!(reduce(hc(2, 1), 0, 10).is_err());
        assert!(reduce(hc(2, 1), 1, 0).is_err());
    }

    #[test]
    fn reduce_is_gcd_for_unit_polarization() {
        for r in 1..=12 {
            for d in -12..=12 {
                let g = if d == 0 { r } else { gcd(r, d) };
                let res = reduce(hc(r, d), 1, default_cap(hc(r, d), 1)).unwrap();
                assert_eq!(res.terminal, st(0, g), "({r},{d})");
            }
        }
    }

    #[test]
    fn terminal_form_examples() {
        assert!(is_terminal_form(st(0, 3), 1));
        assert!(!is_terminal_form(st(4, 0), 1));
        assert!(is_terminal_form(st(4, 0), 2));
        assert!(is_terminal_form(st(3, 2), 3));
        assert!(!is_terminal_form(st(3, 1), 2));
        assert!(!is_terminal_form(st(3, 2), 2));
        assert!(is_terminal_form(st(3, 2), 4));
    }

    #[test]
    fn terminal_form_is_necessary_not_sufficient() {
        assert!(is_terminal_form(st(3, 2), 3));
        let res = reduce(hc(3, 2), 3, default_cap(hc(3, 2), 3)).unwrap();
        assert_eq!(res.terminal, st(0, 1));
    }

    #[test]
    fn reduce_terminal_is_terminal_form_at_default_cap() {
        for h in 1..=4 {
            for r in 1..=10 {
                for d in 0..r {
                    let input = hc(r, d);
                    let res = reduce(input, h, default_cap(input, h)).unwrap();
                    assert!(
                        is_terminal_form(res.terminal, h),
                        "({r},{d}) h={h} -> {}",
                        res.terminal
                    );
                }
            }
        }
    }

    #[test]
    fn orbit_examples() {
        assert!(orbit(hc(2, 1), 1, 8).unwrap().contains(&st(0, 1)));
        let got = orbit(hc(1, 0), 2, 8).unwrap();
        assert_eq!(got[0], st(1, 0));
        assert!(got.len() > 1);
        assert_eq!(orbit(hc(0, 4), 3, 8).unwrap(), vec![st(0, 4)]);
    }

    #[test]
    fn terminal_is_minimum_of_orbit() {
        for (r, d, h) in [(6, 4, 1), (3, 2, 3), (5, 0, 2), (7, 3, 2), (9, 5, 4)] {
            let cap = default_cap(hc(r, d), h);
            let res = reduce(hc(r, d), h, cap).unwrap();
            let all = orbit(hc(r, d), h, cap).unwrap();
            assert!(all.iter().all(|s| res.terminal <= *s));
            assert!(all.contains(&res.terminal));
        }
    }

    #[test]
    fn traces_replay_to_the_terminal() {
        for (r, d, h) in [
            (6, 4, 1),
            (3, 2, 3),
            (5, 0, 2),
            (7, 3, 2),
            (9, 5, 4),
            (12, 7, 3),
            (1, 0, 1),
            (8, 0, 1),
        ] {
            let input = hc(r, d);
            let res = reduce(input, h, default_cap(input, h)).unwrap();
            let replayed = compose_total(&res.trace, input, h);
            let replayed = match replayed {
                Ok(c) => c,
                Err(_) => {
                    assert!(res.trace.is_empty());
                    input
                }
            };
            assert_eq!(
                OrbitState::of_class(replayed).unwrap(),
                res.terminal,
                "({r},{d}) h={h}"
            );
        }
    }

    #[test]
    fn single_edges_replay_to_their_target() {
        for (r, d, h) in [(3, 2, 3), (4, 1, 2), (5, 3, 1), (6, 0, 2)] {
            let src = st(r, d);
            for (target, v) in successor_edges(src, h, 3 * r * h).unwrap() {
                let trace = realize_trace(&[(src, v)], src.class(), h);
                let replayed = compose_total(&trace, src.class(), h).unwrap();
                assert_eq!(
                    OrbitState::of_class(replayed).unwrap(),
                    target,
                    "({r},{d}) h={h} v={v}"
                );
            }
        }
    }

    #[test]
    fn h2_terminals_are_torsion_or_degree_zero() {
        for r in 1..=10 {
            for d in 0..r {
                let input = hc(r, d);
                let res = reduce(input, 2, default_cap(input, 2)).unwrap();
                assert!(
                    res.terminal.r() == 0 || res.terminal.d() == 0,
                    "({r},{d}) -> {}",
                    res.terminal
                );
            }
        }
    }

    #[test]
    fn default_cap_formula() {
        assert_eq!(default_cap(hc(3, 2), 3), 9 + 6 + 3);
        assert_eq!(default_cap(hc(5, -4), 2), 10 + 8 + 2);
        assert_eq!(default_cap(hc(0, 7), 1), 7 + 1);
    }

    #[test]
    fn orbit_edges_are_labeled_moves() {
        let edges = orbit_edges(hc(3, 2), 3, 12).unwrap();
        assert!(edges.contains(&(st(3, 2), 3, st(3, 1))));
        assert!(edges.contains(&(st(3, 2), -6, st(6, 5))));
        assert!(edges.contains(&(st(3, 2), 12, st(12, 7))));
    }
}
