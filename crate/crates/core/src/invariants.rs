//! Hilbert classes, K-classes, slopes, K-group generators, torsion length
//! of the restriction sequence, and line-bundle cohomology by exact gluing
//! linear algebra.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::curves::{Curve, CycleCurve};
use crate::error::Error;
use crate::linalg::integer_rank;
use crate::Result;

/// Per-component degrees of a sheaf's restriction to each component.
pub type Multidegree = Vec<i64>;

/// Coefficients of the Hilbert polynomial P(s) = r s + d; `d` equals the
/// Euler characteristic. Classes of complexes may carry any signs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HilbertClass {
    pub r: i64,
    pub d: i64,
}

impl HilbertClass {
    pub fn new(r: i64, d: i64) -> Self {
        HilbertClass { r, d }
    }

    /// True for classes of actual sheaves: nonnegative rank, and positive
    /// length in the torsion case.
    pub fn is_sheaf_class(&self) -> bool {
        self.r > 0 || (self.r == 0 && self.d > 0)
    }
}

impl Neg for HilbertClass {
    type Output = HilbertClass;
    fn neg(self) -> HilbertClass {
        HilbertClass::new(-self.r, -self.d)
    }
}

impl fmt::Display for HilbertClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.r, self.d)
    }
}

/// Multirank and Euler characteristic, the K-group invariants on a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KClass {
    pub multirank: Vec<i64>,
    pub chi: i64,
}

impl KClass {
    pub fn new(multirank: Vec<i64>, chi: i64) -> Self {
        KClass { multirank, chi }
    }

    pub fn len(&self) -> usize {
        self.multirank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multirank.is_empty()
    }

    /// True when all component ranks are nonnegative.
    pub fn is_sheaf_class(&self) -> bool {
        self.multirank.iter().all(|&r| r >= 0)
    }

    /// The common value of the multirank, if all entries agree.
    pub fn balanced_rank(&self) -> Option<i64> {
        let first = *self.multirank.first()?;
        self.multirank.iter().all(|&r| r == first).then_some(first)
    }

    /// Componentwise sum, the class of a direct sum.
    pub fn add(&self, other: &KClass) -> Result<KClass> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(KClass::new(
            self.multirank
                .iter()
                .zip(&other.multirank)
                .map(|(a, b)| a + b)
                .collect(),
            self.chi + other.chi,
        ))
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, chi={})", self.multirank, self.chi)
    }
}

/// Simpson slope d/r, infinite for torsion classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slope {
    Finite(Rational64),
    Infinite,
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Slope::Infinite, Slope::Infinite) => Ordering::Equal,
            (Slope::Infinite, Slope::Finite(_)) => Ordering::Greater,
            (Slope::Finite(_), Slope::Infinite) => Ordering::Less,
            (Slope::Finite(a), Slope::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Slope::Finite(q) => write!(f, "{q}"),
            Slope::Infinite => write!(f, "infinite"),
        }
    }
}

/// A line bundle on a cycle: multidegree plus the gluing constant at the
/// closing node (all other nodes glue trivially).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleLineBundle {
    multidegree: Multidegree,
    gluing: Rational64,
}

impl CycleLineBundle {
    pub fn new(multidegree: Multidegree, gluing: Rational64) -> Result<Self> {
        if gluing.is_zero() {
            return Err(Error::ZeroGluing);
        }
        Ok(CycleLineBundle {
            multidegree,
            gluing,
        })
    }

    pub fn multidegree(&self) -> &[i64] {
        &self.multidegree
    }

    pub fn gluing(&self) -> Rational64 {
        self.gluing
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree.iter().sum()
    }
}

/// A line bundle on a chain; chains have no gluing moduli.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainLineBundle {
    multidegree: Multidegree,
}

impl ChainLineBundle {
    pub fn new(multidegree: Multidegree) -> Self {
        ChainLineBundle { multidegree }
    }

    pub fn multidegree(&self) -> &[i64] {
        &self.multidegree
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree.iter().sum()
    }
}

/// A line bundle on either kind of curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineBundle {
    Cycle(CycleLineBundle),
    Chain(ChainLineBundle),
}

impl LineBundle {
    pub fn multidegree(&self) -> &[i64] {
        match self {
            LineBundle::Cycle(b) => b.multidegree(),
            LineBundle::Chain(b) => b.multidegree(),
        }
    }

    pub fn total_degree(&self) -> i64 {
        self.multidegree().iter().sum()
    }
}

/// Total Hilbert class of a K-class on a polarized cycle:
/// r = sum of r_i h_i, and d is the Euler characteristic.
pub fn hilbert_of_kclass(kc: &KClass, curve: &CycleCurve) -> Result<HilbertClass> {
    let h = curve.polarization();
    if kc.len() != h.len() {
        return Err(Error::LengthMismatch {
            expected: h.len(),
            found: kc.len(),
        });
    }
    let r = kc.multirank.iter().zip(h).map(|(r, h)| r * h).sum();
    Ok(HilbertClass::new(r, kc.chi))
}

/// Simpson slope of a sheaf class.
pub fn slope(hc: HilbertClass) -> Result<Slope> {
    if !hc.is_sheaf_class() {
        return Err(Error::InvalidClass { r: hc.r, d: hc.d });
    }
    if hc.r == 0 {
        Ok(Slope::Infinite)
    } else {
        Ok(Slope::Finite(Rational64::new(hc.d, hc.r)))
    }
}

/// K-classes of the structure sheaf, of each component sheaf, and of a
/// point sheaf, in that order. The component classes together with the
/// point class form a basis; the structure sheaf is their combination
/// [O_X] = sum_i [O_{C_i}] - N [O_x].
pub fn kgroup_generators(curve: &CycleCurve) -> Vec<KClass> {
    let n = curve.n_components();
    let mut out = Vec::with_capacity(n + 2);
    out.push(KClass::new(vec![1; n], 0));
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        out.push(KClass::new(e, 1));
    }
    out.push(KClass::new(vec![0; n], 1));
    out
}

/// Coefficients of a K-class over the basis of component classes and the
/// point class: the multirank entries, then the point coefficient.
pub fn decompose_kclass(kc: &KClass) -> (Vec<i64>, i64) {
    let rank_sum: i64 = kc.multirank.iter().sum();
    (kc.multirank.clone(), kc.chi - rank_sum)
}

/// Rebuilds a K-class from its basis coefficients.
pub fn recompose_kclass(component_coeffs: &[i64], point_coeff: i64) -> KClass {
    let rank_sum: i64 = component_coeffs.iter().sum();
    KClass::new(component_coeffs.to_vec(), rank_sum + point_coeff)
}

/// Length of the torsion cokernel of the restriction-to-components map:
/// the Euler characteristics of the component restrictions minus the
/// sheaf's own.
pub fn torsion_length(kc: &KClass, md: &[i64]) -> Result<i64> {
    if kc.len() != md.len() {
        return Err(Error::LengthMismatch {
            expected: kc.len(),
            found: md.len(),
        });
    }
    let restricted: i64 = kc
        .multirank
        .iter()
        .zip(md)
        .map(|(&r, &d)| d + r)
        .sum();
    Ok(restricted - kc.chi)
}

/// Dimensions (h0, h1) of line-bundle cohomology, computed from the exact
/// rank of the node-gluing system. Sections on a component are homogeneous
/// forms of the component's degree; a node equates the adjacent end values,
/// with the cycle-closing node weighted by the gluing constant.
pub fn line_bundle_cohomology(lb: &LineBundle, curve: &Curve) -> Result<(usize, usize)> {
    let (md, closing) = match (lb, curve) {
        (LineBundle::Cycle(b), Curve::Cycle(c)) => {
            if b.multidegree().len() != c.n_components() {
                return Err(Error::LengthMismatch {
                    expected: c.n_components(),
                    found: b.multidegree().len(),
                });
            }
            (b.multidegree(), Some(b.gluing()))
        }
        (LineBundle::Chain(b), Curve::Chain(c)) => {
            if b.multidegree().len() != c.length() {
                return Err(Error::LengthMismatch {
                    expected: c.length(),
                    found: b.multidegree().len(),
                });
            }
            (b.multidegree(), None)
        }
        _ => {
            return Err(Error::InvalidParameter(
                "bundle and curve kinds differ".into(),
            ))
        }
    };
    let h0 = gluing_h0(md, closing);
    let total: i64 = md.iter().sum();
    let h1 = h0 as i64 - total - if closing.is_some() { 0 } else { 1 };
    if h1 < 0 {
        return Err(Error::Inconsistent(format!(
            "negative h1 = {h1} from h0 = {h0}"
        )));
    }
    Ok((h0, h1 as usize))
}

/// Solution-space dimension of the gluing system. `closing` carries the
/// cycle's holonomy constant; `None` means a chain (one fewer node, no
/// holonomy).
fn gluing_h0(md: &[i64], closing: Option<Rational64>) -> usize {
    let m = md.len();
    // column layout: components with nonnegative degree contribute d+1
    // coefficients, in component order
    let mut col_of = vec![usize::MAX; m];
    let mut cols = 0usize;
    for (i, &d) in md.iter().enumerate() {
        if d >= 0 {
            col_of[i] = cols;
            cols += d as usize + 1;
        }
    }
    // the value at a component's zero end is its y^d coefficient (first
    // column), at its infinity end the x^d coefficient (last column)
    let zero_end = |i: usize| (md[i] >= 0).then(|| col_of[i]);
    let inf_end = |i: usize| (md[i] >= 0).then(|| col_of[i] + md[i] as usize);
    let n_nodes = if closing.is_some() { m } else { m - 1 };
    let mut rows = Vec::with_capacity(n_nodes);
    for j in 0..n_nodes {
        let lambda = match closing {
            Some(l) if j == n_nodes - 1 => l,
            _ => Rational64::one(),
        };
        // equation at node j, scaled to integers:
        //   den * s_{j+1}(zero end) - num * s_j(infinity end) = 0
        let mut row = vec![BigInt::zero(); cols];
        if let Some(c) = zero_end((j + 1) % m) {
            row[c] += BigInt::from(*lambda.denom());
        }
        if let Some(c) = inf_end(j) {
            row[c] -= BigInt::from(*lambda.numer());
        }
        rows.push(row);
    }
    cols - integer_rank(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::ChainCurve;

    fn cycle(n: usize) -> CycleCurve {
        CycleCurve::with_unit_polarization(n).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn cycle_cohomology(md: &[i64], lambda: Rational64) -> (usize, usize) {
        let lb = LineBundle::Cycle(CycleLineBundle::new(md.to_vec(), lambda).unwrap());
        let curve = Curve::Cycle(cycle(md.len()));
        line_bundle_cohomology(&lb, &curve).unwrap()
    }

    fn chain_cohomology(md: &[i64]) -> (usize, usize) {
        let lb = LineBundle::Chain(ChainLineBundle::new(md.to_vec()));
        let curve = Curve::Chain(ChainCurve::new(md.len()).unwrap());
        line_bundle_cohomology(&lb, &curve).unwrap()
    }

    #[test]
    fn hilbert_of_kclass_examples() {
        let hc = hilbert_of_kclass(&KClass::new(vec![1, 1], 0), &cycle(2)).unwrap();
        assert_eq!(hc, HilbertClass::new(2, 0));
        let hc = hilbert_of_kclass(&KClass::new(vec![0, 0], 5), &cycle(2)).unwrap();
        assert_eq!(hc, HilbertClass::new(0, 5));
        let curve = CycleCurve::new(vec![1, 2]).unwrap();
        let hc = hilbert_of_kclass(&KClass::new(vec![2, 2], 0), &curve).unwrap();
        assert_eq!(hc, HilbertClass::new(6, 0));
    }

    #[test]
    fn hilbert_of_kclass_length_check() {
        assert!(matches!(
            hilbert_of_kclass(&KClass::new(vec![1], 0), &cycle(2)),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn slope_examples() {
        assert_eq!(slope(HilbertClass::new(4, 2)).unwrap(), Slope::Finite(rat(1, 2)));
        assert_eq!(slope(HilbertClass::new(0, 5)).unwrap(), Slope::Infinite);
        assert_eq!(slope(HilbertClass::new(2, 0)).unwrap(), Slope::Finite(rat(0, 1)));
        assert!(slope(HilbertClass::new(0, -1)).is_err());
        assert!(slope(HilbertClass::new(-2, 1)).is_err());
    }

    #[test]
    fn slope_ordering() {
        assert!(Slope::Infinite > Slope::Finite(rat(1000, 1)));
        assert!(Slope::Finite(rat(1, 2)) < Slope::Finite(rat(2, 3)));
        assert_eq!(Slope::Infinite, Slope::Infinite);
    }

    #[test]
    fn kgroup_generator_examples() {
        let gens = kgroup_generators(&cycle(3));
        assert_eq!(gens.len(), 5);
        assert_eq!(gens[0], KClass::new(vec![1, 1, 1], 0));
        assert_eq!(*gens.last().unwrap(), KClass::new(vec![0, 0, 0], 1));
        let gens = kgroup_generators(&cycle(2));
        assert_eq!(gens[1], KClass::new(vec![1, 0], 1));
    }

    #[test]
    fn structure_sheaf_decomposes_over_the_basis() {
        for n in 1..=5 {
            let gens = kgroup_generators(&cycle(n));
            let (coeffs, point) = decompose_kclass(&gens[0]);
            assert_eq!(coeffs, vec![1; n]);
            assert_eq!(point, -(n as i64));
            assert_eq!(recompose_kclass(&coeffs, point), gens[0]);
        }
    }

    #[test]
    fn decompose_recompose_roundtrip() {
        let kc = KClass::new(vec![3, 0, 7], -4);
        let (c, p) = decompose_kclass(&kc);
        assert_eq!(recompose_kclass(&c, p), kc);
    }

    #[test]
    fn torsion_length_examples() {
        // line bundle on a cycle: one torsion point per node
        for n in 1..=5 {
            let md: Vec<i64> = (0..n as i64).map(|i| i - 1).collect();
            let chi: i64 = md.iter().sum();
            let kc = KClass::new(vec![1; n], chi);
            assert_eq!(torsion_length(&kc, &md).unwrap(), n as i64);
        }
        // a sheaf supported on one component restricts to itself
        let kc = KClass::new(vec![0, 1, 0], 1);
        assert_eq!(torsion_length(&kc, &[0, 0, 0]).unwrap(), 0);
        // ideal sheaf of a node on the three-component cycle
        let kc = KClass::new(vec![1, 1, 1], -1);
        assert_eq!(torsion_length(&kc, &[-1, 0, -1]).unwrap(), 2);
    }

    #[test]
    fn cohomology_spec_vectors() {
        assert_eq!(cycle_cohomology(&[0, 0], rat(1, 1)), (1, 1));
        assert_eq!(cycle_cohomology(&[2, -2], rat(1, 1)), (1, 1));
        assert_eq!(cycle_cohomology(&[0, 0], rat(2, 1)), (0, 0));
    }

    /// Independent oracle for the trivial bundle with holonomy 2: the full
    /// gluing system written out by hand and solved over rationals.
    #[test]
    fn nontrivial_holonomy_kills_sections() {
        // sections are constants (a, b); node equations b = a and a = 2 b,
        // so a = 2 a forces a = b = 0
        let rows = vec![
            vec![BigInt::from(-1), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(-2)],
        ];
        assert_eq!(integer_rank(rows), 2);
        assert_eq!(cycle_cohomology(&[0, 0], rat(2, 1)), (0, 0));
    }

    #[test]
    fn one_component_cycle_cohomology() {
        // trivial bundle on the one-node rational curve
        assert_eq!(cycle_cohomology(&[0], rat(1, 1)), (1, 1));
        assert_eq!(cycle_cohomology(&[0], rat(5, 3)), (0, 0));
        // positive and negative degrees
        assert_eq!(cycle_cohomology(&[3], rat(1, 1)), (3, 0));
        assert_eq!(cycle_cohomology(&[-2], rat(7, 2)), (0, 2));
    }

    #[test]
    fn holonomy_independence_for_rigid_sections() {
        for lambda in [rat(1, 1), rat(2, 1), rat(-5, 3), rat(7, 11)] {
            assert_eq!(cycle_cohomology(&[2, -2], lambda), (1, 1));
        }
    }

    #[test]
    fn chain_cohomology_values() {
        assert_eq!(chain_cohomology(&[0, 0]), (1, 0));
        assert_eq!(chain_cohomology(&[-1]), (0, 0));
        assert_eq!(chain_cohomology(&[-2]), (0, 1));
        assert_eq!(chain_cohomology(&[1, 1]), (3, 0));
        assert_eq!(chain_cohomology(&[-1, -1]), (0, 1));
    }

    #[test]
    fn euler_law_spot_checks() {
        for (md, lambda) in [
            (vec![1, 2, -3], rat(1, 1)),
            (vec![-1, 4], rat(3, 5)),
            (vec![0, 0, 0, 0], rat(-2, 1)),
            (vec![5], rat(9, 4)),
        ] {
            let (h0, h1) = cycle_cohomology(&md, lambda);
            let total: i64 = md.iter().sum();
            assert_eq!(h0 as i64 - h1 as i64, total);
        }
        for md in [vec![2, -1], vec![0], vec![-3, 1, 4]] {
            let (h0, h1) = chain_cohomology(&md);
            let total: i64 = md.iter().sum();
            assert_eq!(h0 as i64 - h1 as i64, total + 1);
        }
    }

    #[test]
    fn cohomology_guards() {
        assert!(CycleLineBundle::new(vec![0, 0], rat(0, 1)).is_err());
        let lb = LineBundle::Cycle(CycleLineBundle::new(vec![0, 0], rat(1, 1)).unwrap());
        let wrong = Curve::Cycle(cycle(3));
        assert!(matches!(
            line_bundle_cohomology(&lb, &wrong),
            Err(Error::LengthMismatch { .. })
        ));
        let chain_curve = Curve::Chain(ChainCurve::new(2).unwrap());
        assert!(line_bundle_cohomology(&lb, &chain_curve).is_err());
    }

    #[test]
    fn kclass_addition() {
        let a = KClass::new(vec![1, 2], 3);
        let b = KClass::new(vec![0, 4], -1);
        assert_eq!(a.add(&b).unwrap(), KClass::new(vec![1, 6], 2));
        assert!(a.add(&KClass::new(vec![1], 0)).is_err());
    }
}
