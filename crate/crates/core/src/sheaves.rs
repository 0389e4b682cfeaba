//! Classification data for indecomposable depth-one sheaves on a cycle:
//! invariant extraction, local freeness, slope stability for line bundles
//! and degree-zero summands, Jordan-Holder graded objects, and the
//! maximal-ideal builders.

use std::cmp::Ordering;
use std::fmt;

use num_rational::Rational64;

use crate::curves::{ChainMap, CurvePoint, CycleCurve};
use crate::error::Error;
use crate::invariants::{
    hilbert_of_kclass, ChainLineBundle, CycleLineBundle, HilbertClass, KClass, LineBundle,
    Multidegree,
};
use crate::Result;

/// One indecomposable summand: either the direct image of a line bundle
/// twisted by an indecomposable unipotent bundle along the degree-`cover`
/// cyclic covering, or the pushforward of a chain line bundle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IndecomposableSheaf {
    Vb {
        cover: usize,
        m: i64,
        bundle: CycleLineBundle,
    },
    Nlf {
        map: ChainMap,
        bundle: ChainLineBundle,
    },
}

impl IndecomposableSheaf {
    /// Locally free summand over a host with `bundle` on the covering
    /// cycle; covers of degree > 1 require a non-periodic multidegree.
    pub fn vb(cover: usize, m: i64, bundle: CycleLineBundle) -> Result<Self> {
        let out = IndecomposableSheaf::Vb { cover, m, bundle };
        out.validate()?;
        Ok(out)
    }

    /// Non-locally-free summand: a line bundle pushed forward from a
    /// chain running through the host cycle.
    pub fn nlf(map: ChainMap, bundle: ChainLineBundle) -> Result<Self> {
        let out = IndecomposableSheaf::Nlf { map, bundle };
        out.validate()?;
        Ok(out)
    }

    /// Number of components of the host cycle.
    pub fn host_components(&self) -> usize {
        match self {
            IndecomposableSheaf::Vb { cover, bundle, .. } => {
                bundle.multidegree().len() / (*cover).max(1)
            }
            IndecomposableSheaf::Nlf { map, .. } => map.target_components(),
        }
    }

    /// Re-checks the construction invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            IndecomposableSheaf::Vb { cover, m, bundle } => {
                if *cover < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "cover degree must be positive, got {cover}"
                    )));
                }
                if *m < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "twist index must be positive, got {m}"
                    )));
                }
                let len = bundle.multidegree().len();
                if len == 0 || len % cover != 0 {
                    return Err(Error::InvalidParameter(format!(
                        "bundle length {len} is not a positive multiple of cover degree {cover}"
                    )));
                }
                if *cover > 1 && !is_nonperiodic(bundle.multidegree(), *cover, len / cover)? {
                    return Err(Error::PeriodicMultidegree);
                }
                Ok(())
            }
            IndecomposableSheaf::Nlf { map, bundle } => {
                if map.length() != bundle.multidegree().len() {
                    return Err(Error::LengthMismatch {
                        expected: map.length(),
                        found: bundle.multidegree().len(),
                    });
                }
                Ok(())
            }
        }
    }

    /// K-class over the host together with the host multidegree.
    pub fn invariants(&self) -> Result<(KClass, Multidegree)> {
        self.validate()?;
        let n = self.host_components();
        match self {
            IndecomposableSheaf::Vb { cover, m, bundle } => {
                let mut md = vec![0i64; n];
                for (j, d) in bundle.multidegree().iter().enumerate() {
                    md[j % n] += m * d;
                }
                let chi = m * bundle.total_degree();
                let rank = *cover as i64 * m;
                Ok((KClass::new(vec![rank; n], chi), md))
            }
            IndecomposableSheaf::Nlf { map, bundle } => {
                let mut multirank = vec![0i64; n];
                let mut md = vec![0i64; n];
                for (j, d) in bundle.multidegree().iter().enumerate() {
                    let i = map.image(j)?;
                    multirank[i] += 1;
                    md[i] += d;
                }
                let chi = 1 + bundle.total_degree();
                Ok((KClass::new(multirank, chi), md))
            }
        }
    }
}

/// A direct sum of indecomposable summands over one host cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafDescriptor {
    host: CycleCurve,
    summands: Vec<IndecomposableSheaf>,
}

impl SheafDescriptor {
    pub fn new(host: CycleCurve, summands: Vec<IndecomposableSheaf>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::EmptyDescriptor);
        }
        for s in &summands {
            s.validate()?;
            if s.host_components() != host.n_components() {
                return Err(Error::LengthMismatch {
                    expected: host.n_components(),
                    found: s.host_components(),
                });
            }
        }
        Ok(SheafDescriptor { host, summands })
    }

    pub fn host(&self) -> &CycleCurve {
        &self.host
    }

    pub fn summands(&self) -> &[IndecomposableSheaf] {
        &self.summands
    }

    /// Componentwise sums of the summand invariants.
    pub fn invariants(&self) -> Result<(KClass, Multidegree)> {
        let n = self.host.n_components();
        let mut kc = KClass::new(vec![0; n], 0);
        let mut md = vec![0i64; n];
        for s in &self.summands {
            let (skc, smd) = s.invariants()?;
            kc = kc.add(&skc)?;
            for (acc, d) in md.iter_mut().zip(&smd) {
                *acc += d;
            }
        }
        Ok((kc, md))
    }

    /// Total Hilbert class under the host polarization.
    pub fn hilbert_class(&self) -> Result<HilbertClass> {
        let (kc, _) = self.invariants()?;
        hilbert_of_kclass(&kc, &self.host)
    }

    /// True when every summand is locally free.
    pub fn is_locally_free(&self) -> bool {
        self.summands
            .iter()
            .all(|s| matches!(s, IndecomposableSheaf::Vb { .. }))
    }

    /// Total degree minus Euler characteristic: zero exactly on locally
    /// free sheaves, and minus one per chain summand otherwise.
    pub fn locally_free_defect(&self) -> Result<i64> {
        let (kc, md) = self.invariants()?;
        Ok(md.iter().sum::<i64>() - kc.chi)
    }
}

/// Slope-stability outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityVerdict {
    Stable,
    StrictlySemistable,
    Unstable,
}

impl fmt::Display for StabilityVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self {
            StabilityVerdict::Stable => "stable",
            StabilityVerdict::StrictlySemistable => "strictly semistable",
            StabilityVerdict::Unstable => "unstable",
        };
        write!(f, "{word}")
    }
}

/// One Jordan-Holder factor of a semistable degree-zero sheaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JHFactor {
    /// The degree minus-one line bundle supported on one component.
    MinusOneOnComponent(usize),
    /// A stable multidegree-zero line bundle, identified by its gluing.
    StableLineBundle(Rational64),
}

impl fmt::Display for JHFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JHFactor::MinusOneOnComponent(i) => write!(f, "O_C{}(-1)", i + 1),
            JHFactor::StableLineBundle(l) => write!(f, "L(lambda={l})"),
        }
    }
}

/// True iff the multidegree over the degree-`s` covering of an
/// `n`-component cycle differs from all of its nontrivial deck shifts.
pub fn is_nonperiodic(md: &[i64], s: usize, n: usize) -> Result<bool> {
    if md.len() != s * n {
        return Err(Error::LengthMismatch {
            expected: s * n,
            found: md.len(),
        });
    }
    let total = md.len();
    for t in 1..s {
        let shift = t * n;
        if (0..total).all(|i| md[i] == md[(i + shift) % total]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The multidegree repeated along a degree-`s` cyclic covering.
pub fn pullback_multidegree(md: &[i64], s: usize) -> Multidegree {
    md.repeat(s)
}

fn cross_cmp(n1: i64, d1: i64, n2: i64, d2: i64) -> Ordering {
    debug_assert!(d1 > 0 && d2 > 0);
    (n1 as i128 * d2 as i128).cmp(&(n2 as i128 * d1 as i128))
}

/// Slope comparison of every connected proper arc against the total
/// slope. Disconnected subcurves need no separate test: a union's slope
/// is a mediant of its arcs' slopes, so the extremes occur on arcs.
fn arc_verdict(md: &[i64], pol: &[i64], cyclic: bool) -> StabilityVerdict {
    let n = md.len();
    if n == 1 {
        return StabilityVerdict::Stable;
    }
    let mu_num: i64 = md.iter().sum::<i64>() + if cyclic { 0 } else { 1 };
    let mu_den: i64 = pol.iter().sum();
    let span = if cyclic { 2 * n } else { n };
    let mut pd = vec![0i64; span + 1];
    let mut ph = vec![0i64; span + 1];
    for i in 0..span {
        pd[i + 1] = pd[i] + md[i % n];
        ph[i + 1] = ph[i] + pol[i % n];
    }
    let mut saw_equal = false;
    for start in 0..n {
        let max_len = if cyclic { n - 1 } else { n - start };
        for len in 1..=max_len {
            if !cyclic && start == 0 && len == n {
                continue;
            }
            let zd = pd[start + len] - pd[start];
            let zh = ph[start + len] - ph[start];
            match cross_cmp(zd + 1, zh, mu_num, mu_den) {
                Ordering::Less => return StabilityVerdict::Unstable,
                Ordering::Equal => saw_equal = true,
                Ordering::Greater => {}
            }
        }
    }
    if saw_equal {
        StabilityVerdict::StrictlySemistable
    } else {
        StabilityVerdict::Stable
    }
}

/// Slope stability of a line bundle under the given per-component
/// polarization; chains expect the polarization pulled back from their
/// host.
pub fn line_bundle_stability(lb: &LineBundle, polarization: &[i64]) -> Result<StabilityVerdict> {
    let md = lb.multidegree();
    if md.len() != polarization.len() {
        return Err(Error::LengthMismatch {
            expected: md.len(),
            found: polarization.len(),
        });
    }
    if md.is_empty() {
        return Err(Error::InvalidParameter("empty multidegree".into()));
    }
    if let Some(h) = polarization.iter().find(|&&h| h < 1) {
        return Err(Error::InvalidParameter(format!(
            "polarization degrees must be positive, got {h}"
        )));
    }
    Ok(arc_verdict(md, polarization, matches!(lb, LineBundle::Cycle(_))))
}

fn chain_pullback_polarization(map: &ChainMap, host_pol: &[i64]) -> Result<Vec<i64>> {
    if map.target_components() != host_pol.len() {
        return Err(Error::LengthMismatch {
            expected: map.target_components(),
            found: host_pol.len(),
        });
    }
    (0..map.length()).map(|j| Ok(host_pol[map.image(j)?])).collect()
}

/// Stability of a rank-one summand under the host polarization: the
/// summand is a line bundle on its own curve, and stability descends
/// along the pushforward.
pub fn rank_one_stability(
    x: &IndecomposableSheaf,
    host_pol: &[i64],
) -> Result<StabilityVerdict> {
    x.validate()?;
    match x {
        IndecomposableSheaf::Vb { cover, m, bundle } => {
            if *m != 1 {
                return Err(Error::InvalidParameter(format!(
                    "stability of higher twists (m = {m}) is decided only at degree zero"
                )));
            }
            if bundle.multidegree().len() != cover * host_pol.len() {
                return Err(Error::LengthMismatch {
                    expected: bundle.multidegree().len(),
                    found: cover * host_pol.len(),
                });
            }
            let pol = pullback_multidegree(host_pol, *cover);
            line_bundle_stability(&LineBundle::Cycle(bundle.clone()), &pol)
        }
        IndecomposableSheaf::Nlf { map, bundle } => {
            let pol = chain_pullback_polarization(map, host_pol)?;
            line_bundle_stability(&LineBundle::Chain(bundle.clone()), &pol)
        }
    }
}

/// Semistability of a degree-zero indecomposable under the host
/// polarization: reduces to line-bundle stability on the summand's own
/// curve with the pulled-back polarization.
pub fn degree0_semistable(x: &IndecomposableSheaf, host_pol: &[i64]) -> Result<bool> {
    let (kc, _) = x.invariants()?;
    if kc.chi != 0 {
        return Err(Error::NonzeroEuler { chi: kc.chi });
    }
    match x {
        IndecomposableSheaf::Vb { cover, bundle, .. } => {
            if bundle.multidegree().len() != cover * host_pol.len() {
                return Err(Error::LengthMismatch {
                    expected: bundle.multidegree().len(),
                    found: cover * host_pol.len(),
                });
            }
            let pol = pullback_multidegree(host_pol, *cover);
            let verdict = line_bundle_stability(&LineBundle::Cycle(bundle.clone()), &pol)?;
            Ok(verdict != StabilityVerdict::Unstable)
        }
        IndecomposableSheaf::Nlf { map, bundle } => {
            debug_assert_eq!(bundle.total_degree(), -1);
            let pol = chain_pullback_polarization(map, host_pol)?;
            let verdict = line_bundle_stability(&LineBundle::Chain(bundle.clone()), &pol)?;
            Ok(verdict != StabilityVerdict::Unstable)
        }
    }
}

/// Stability of a degree-zero indecomposable on a cycle with at least
/// two components: only single-component degree minus-one pushforwards
/// and plain multidegree-zero line bundles qualify.
pub fn degree0_stable(x: &IndecomposableSheaf) -> Result<bool> {
    let (kc, _) = x.invariants()?;
    if kc.chi != 0 {
        return Err(Error::NonzeroEuler { chi: kc.chi });
    }
    if x.host_components() < 2 {
        return Err(Error::SingleComponent);
    }
    match x {
        IndecomposableSheaf::Nlf { map, bundle } => {
            Ok(map.length() == 1 && bundle.multidegree()[0] == -1)
        }
        IndecomposableSheaf::Vb { cover, m, bundle } => {
            Ok(*cover == 1 && *m == 1 && bundle.multidegree().iter().all(|&d| d == 0))
        }
    }
}

/// Jordan-Holder factors of a semistable degree-zero descriptor, as a
/// sorted multiset.
pub fn graded_degree0(d: &SheafDescriptor) -> Result<Vec<JHFactor>> {
    let n = d.host().n_components();
    let pol = d.host().polarization();
    let mut out = Vec::new();
    for s in d.summands() {
        if !degree0_semistable(s, pol)? {
            return Err(Error::NotSemistable);
        }
        match s {
            IndecomposableSheaf::Vb { cover, m, bundle } => {
                let trivial = bundle.multidegree().iter().all(|&d| d == 0);
                if *cover == 1 && trivial {
                    out.extend(
                        std::iter::repeat(JHFactor::StableLineBundle(bundle.gluing()))
                            .take(*m as usize),
                    );
                } else {
                    let mult = (*cover as i64 * m) as usize;
                    for i in 0..n {
                        out.extend(
                            std::iter::repeat(JHFactor::MinusOneOnComponent(i)).take(mult),
                        );
                    }
                }
            }
            IndecomposableSheaf::Nlf { map, .. } => {
                for j in 0..map.length() {
                    out.push(JHFactor::MinusOneOnComponent(map.image(j)?));
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Ideal sheaf of one point: a twisted-down line bundle for a smooth
/// point, and the pushforward of the cut-open cycle for a node.
pub fn maximal_ideal_sheaf(curve: &CycleCurve, x: &CurvePoint) -> Result<SheafDescriptor> {
    let n = curve.n_components();
    let summand = match x {
        CurvePoint::Smooth {
            component,
            coordinate,
        } => {
            if *component >= n {
                return Err(Error::IndexOutOfRange {
                    index: *component,
                    bound: n,
                });
            }
            let mut md = vec![0i64; n];
            md[*component] = -1;
            IndecomposableSheaf::vb(1, 1, CycleLineBundle::new(md, *coordinate)?)?
        }
        CurvePoint::Node { index } => {
            if *index >= n {
                return Err(Error::IndexOutOfRange {
                    index: *index,
                    bound: n,
                });
            }
            let md = if n == 1 {
                vec![-2]
            } else {
                let mut md = vec![0i64; n];
                md[0] = -1;
                md[n - 1] = -1;
                md
            };
            IndecomposableSheaf::nlf(
                ChainMap::new(n, (index + 1) % n, n)?,
                ChainLineBundle::new(md),
            )?
        }
    };
    SheafDescriptor::new(curve.clone(), vec![summand])
}
