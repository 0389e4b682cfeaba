//! Combinatorial cycles and chains of projective lines: components,
//! polarizations, proper connected subcurves, and chain-to-cycle maps.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::error::Error;
use crate::Result;

/// A cycle of projective lines; node `j` joins component `j` to component
/// `(j + 1) mod N`. The single-component cycle is the rational curve with
/// one node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleCurve {
    polarization: Vec<i64>,
}

impl CycleCurve {
    /// Builds a cycle from its per-component polarization degrees.
    pub fn new(polarization: Vec<i64>) -> Result<Self> {
        if polarization.is_empty() {
            return Err(Error::InvalidParameter(
                "a cycle needs at least one component".into(),
            ));
        }
        if polarization.iter().any(|&h| h < 1) {
            return Err(Error::InvalidParameter(
                "polarization degrees must be positive".into(),
            ));
        }
        Ok(CycleCurve { polarization })
    }

    /// Cycle of `n` components, every polarization degree equal to one.
    pub fn with_unit_polarization(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn n_components(&self) -> usize {
        self.polarization.len()
    }

    pub fn polarization(&self) -> &[i64] {
        &self.polarization
    }

    /// Total polarization degree, the sum over all components.
    pub fn total_degree(&self) -> i64 {
        self.polarization.iter().sum()
    }

    /// Every connected proper subcurve, as arcs of consecutive components.
    pub fn proper_arcs(&self) -> Vec<Arc> {
        let n = self.n_components();
        let mut arcs = Vec::new();
        if n < 2 {
            return arcs;
        }
        for len in 1..n {
            for start in 0..n {
                arcs.push(Arc {
                    start,
                    len,
                    host_len: n,
                    cyclic: true,
                });
            }
        }
        arcs
    }
}

/// A chain of projective lines; node `j` joins components `j` and `j + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainCurve {
    length: usize,
}

impl ChainCurve {
    pub fn new(length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidParameter(
                "a chain needs at least one component".into(),
            ));
        }
        Ok(ChainCurve { length })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// Every connected proper subcurve.
    pub fn proper_arcs(&self) -> Vec<Arc> {
        let k = self.length;
        let mut arcs = Vec::new();
        for len in 1..k {
            for start in 0..=(k - len) {
                arcs.push(Arc {
                    start,
                    len,
                    host_len: k,
                    cyclic: false,
                });
            }
        }
        arcs
    }
}

/// Either kind of host curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Curve {
    Cycle(CycleCurve),
    Chain(ChainCurve),
}

impl Curve {
    pub fn n_components(&self) -> usize {
        match self {
            Curve::Cycle(c) => c.n_components(),
            Curve::Chain(c) => c.length(),
        }
    }

    pub fn proper_arcs(&self) -> Vec<Arc> {
        match self {
            Curve::Cycle(c) => c.proper_arcs(),
            Curve::Chain(c) => c.proper_arcs(),
        }
    }
}

/// A connected proper subcurve: `len` consecutive components starting at
/// `start`, wrapping around on cycles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub start: usize,
    pub len: usize,
    pub host_len: usize,
    pub cyclic: bool,
}

impl Arc {
    /// Component indices covered by the arc, in order.
    pub fn components(&self) -> impl Iterator<Item = usize> + '_ {
        let (start, host, cyclic) = (self.start, self.host_len, self.cyclic);
        (0..self.len).map(move |t| if cyclic { (start + t) % host } else { start + t })
    }

    /// Number of nodes joining the arc to the rest of the curve.
    pub fn boundary_nodes(&self) -> u8 {
        if self.cyclic {
            return 2;
        }
        let mut b = 2;
        if self.start == 0 {
            b -= 1;
        }
        if self.start + self.len == self.host_len {
            b -= 1;
        }
        b
    }
}

/// A finite map from a chain into a cycle, winding from a start component
/// in the positive cyclic direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ChainMap {
    length: usize,
    start: usize,
    target_components: usize,
}

impl ChainMap {
    pub fn new(length: usize, start: usize, target_components: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidParameter(
                "a chain map needs a chain of positive length".into(),
            ));
        }
        if target_components == 0 {
            return Err(Error::InvalidParameter(
                "a chain map needs a nonempty target cycle".into(),
            ));
        }
        if start >= target_components {
            return Err(Error::IndexOutOfRange {
                index: start,
                bound: target_components,
            });
        }
        Ok(ChainMap {
            length,
            start,
            target_components,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn target_components(&self) -> usize {
        self.target_components
    }

    /// Image of chain component `j` in the target cycle.
    pub fn image(&self, j: usize) -> Result<usize> {
        if j >= self.length {
            return Err(Error::IndexOutOfRange {
                index: j,
                bound: self.length,
            });
        }
        Ok((self.start + j) % self.target_components)
    }
}

/// A closed point of a cycle: either a smooth point with a nonzero
/// coordinate on one component (the nodes of each component sit at
/// coordinates 0 and infinity), or a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvePoint {
    Smooth { component: usize, coordinate: Rational64 },
    Node { index: usize },
}

impl CurvePoint {
    /// Smooth point with the given nonzero coordinate.
    pub fn smooth(component: usize, coordinate: Rational64) -> Result<Self> {
        if coordinate.is_zero() {
            return Err(Error::InvalidParameter(
                "smooth-point coordinates are nonzero".into(),
            ));
        }
        Ok(CurvePoint::Smooth {
            component,
            coordinate,
        })
    }

    pub fn node(index: usize) -> Self {
        CurvePoint::Node { index }
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Smooth {
                component,
                coordinate,
            } => write!(f, "smooth point t={} on C{}", coordinate, component + 1),
            CurvePoint::Node { index } => write!(f, "node {index}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Oracle: every connected proper component subset, by brute force over
    /// all subsets.
    fn connected_proper_subsets(n: usize, cyclic: bool) -> BTreeSet<BTreeSet<usize>> {
        let mut out = BTreeSet::new();
        for mask in 1u32..((1u32 << n) - 1) {
            let set: BTreeSet<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            let mut runs = 0;
            for i in 0..n {
                let here = mask >> i & 1 == 1;
                let before = if i == 0 {
                    if cyclic {
                        mask >> (n - 1) & 1 == 1
                    } else {
                        false
                    }
                } else {
                    mask >> (i - 1) & 1 == 1
                };
                if here && !before {
                    runs += 1;
                }
            }
            if runs == 1 {
                out.insert(set);
            }
        }
        out
    }

    fn arc_component_sets(arcs: &[Arc]) -> BTreeSet<BTreeSet<usize>> {
        arcs.iter().map(|a| a.components().collect()).collect()
    }

    #[test]
    fn cycle_arc_counts() {
        assert_eq!(CycleCurve::with_unit_polarization(1).unwrap().proper_arcs().len(), 0);
        assert_eq!(CycleCurve::with_unit_polarization(2).unwrap().proper_arcs().len(), 2);
        assert_eq!(CycleCurve::with_unit_polarization(3).unwrap().proper_arcs().len(), 6);
        for n in 2..=8 {
            let curve = CycleCurve::with_unit_polarization(n).unwrap();
            assert_eq!(curve.proper_arcs().len(), n * (n - 1));
        }
    }

    #[test]
    fn chain_arc_counts() {
        assert_eq!(ChainCurve::new(1).unwrap().proper_arcs().len(), 0);
        assert_eq!(ChainCurve::new(3).unwrap().proper_arcs().len(), 5);
        for k in 1..=8 {
            let curve = ChainCurve::new(k).unwrap();
            assert_eq!(curve.proper_arcs().len(), k * (k + 1) / 2 - 1);
        }
    }

    #[test]
    fn arcs_match_connected_subset_oracle() {
        for n in 2..=8 {
            let curve = CycleCurve::with_unit_polarization(n).unwrap();
            let arcs = curve.proper_arcs();
            let sets = arc_component_sets(&arcs);
            assert_eq!(sets.len(), arcs.len(), "cycle arcs must be duplicate-free");
            assert_eq!(sets, connected_proper_subsets(n, true));
        }
        for k in 2..=8 {
            let curve = ChainCurve::new(k).unwrap();
            let arcs = curve.proper_arcs();
            let sets = arc_component_sets(&arcs);
            assert_eq!(sets.len(), arcs.len(), "chain arcs must be duplicate-free");
            assert_eq!(sets, connected_proper_subsets(k, false));
        }
    }

    #[test]
    fn boundary_node_counts() {
        for arc in CycleCurve::with_unit_polarization(5).unwrap().proper_arcs() {
            assert_eq!(arc.boundary_nodes(), 2);
        }
        let chain = ChainCurve::new(4).unwrap();
        for arc in chain.proper_arcs() {
            let touches_end = arc.start == 0 || arc.start + arc.len == 4;
            assert_eq!(arc.boundary_nodes(), if touches_end { 1 } else { 2 });
        }
    }

    #[test]
    fn chain_image_examples() {
        let m = ChainMap::new(4, 0, 2).unwrap();
        assert_eq!(m.image(3).unwrap(), 1);
        let m = ChainMap::new(1, 2, 4).unwrap();
        assert_eq!(m.image(0).unwrap(), 2);
        let m = ChainMap::new(6, 1, 3).unwrap();
        assert_eq!(m.image(5).unwrap(), 0);
    }

    #[test]
    fn chain_image_bounds() {
        let m = ChainMap::new(2, 0, 3).unwrap();
        assert!(matches!(m.image(2), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(
            ChainMap::new(2, 3, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn constructor_guards() {
        assert!(CycleCurve::new(vec![]).is_err());
        assert!(CycleCurve::new(vec![1, 0]).is_err());
        assert!(ChainCurve::new(0).is_err());
        assert!(CurvePoint::smooth(0, Rational64::from_integer(0)).is_err());
        assert!(CurvePoint::smooth(0, Rational64::new(3, 2)).is_ok());
    }
}
