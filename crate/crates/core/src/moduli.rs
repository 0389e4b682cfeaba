//! Moduli structure of balanced degree-zero semistable sheaves on a
//! cycle: the symmetric-power point of a descriptor, its inverse up to
//! S-equivalence, the stable locus, and component dimensions.

use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;

use crate::curves::CycleCurve;
use crate::error::Error;
use crate::invariants::CycleLineBundle;
use crate::sheaves::{graded_degree0, IndecomposableSheaf, JHFactor, SheafDescriptor};
use crate::curves::ChainMap;
use crate::invariants::ChainLineBundle;
use crate::Result;

/// One point of the one-cycle target curve: a smooth point named by its
/// coordinate, or the single node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModuliEntry {
    Smooth(Rational64),
    NodePoint,
}

impl fmt::Display for ModuliEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliEntry::Smooth(l) => write!(f, "smooth({l})"),
            ModuliEntry::NodePoint => write!(f, "node"),
        }
    }
}

/// An unordered tuple of target-curve points; the image of a balanced
/// degree-zero semistable sheaf in the symmetric power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliPointE1 {
    entries: Vec<ModuliEntry>,
}

impl ModuliPointE1 {
    pub fn new(mut entries: Vec<ModuliEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty moduli point".into()));
        }
        for e in &entries {
            if let ModuliEntry::Smooth(l) = e {
                if l.is_zero() {
                    return Err(Error::ZeroGluing);
                }
            }
        }
        entries.sort();
        Ok(ModuliPointE1 { entries })
    }

    pub fn entries(&self) -> &[ModuliEntry] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for ModuliPointE1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

/// Shape of the stable locus of balanced-rank degree-zero moduli.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StableLocusDescription {
    /// The rank equals the total polarization degree: a one-dimensional
    /// multiplicative-group component, compactifying to a nodal curve.
    KStarComponent,
    /// The rank equals the polarization degree of these components, each
    /// contributing one isolated stable sheaf.
    IsolatedPoints(Vec<usize>),
    Empty,
}

impl fmt::Display for StableLocusDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StableLocusDescription::KStarComponent => {
                write!(f, "one-dimensional torus component")
            }
            StableLocusDescription::IsolatedPoints(ids) => {
                write!(f, "isolated points on ")?;
                for (k, i) in ids.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "C{}", i + 1)?;
                }
                Ok(())
            }
            StableLocusDescription::Empty => write!(f, "empty"),
        }
    }
}

fn require_multiple_components(curve: &CycleCurve) -> Result<()> {
    if curve.n_components() < 2 {
        return Err(Error::SingleComponent);
    }
    Ok(())
}

/// The point of the symmetric power carrying the S-class of a balanced
/// degree-zero semistable descriptor: stable line-bundle factors land at
/// smooth points, and each full family of component sheaves collapses to
/// the node.
pub fn moduli_point(d: &SheafDescriptor) -> Result<ModuliPointE1> {
    require_multiple_components(d.host())?;
    let n = d.host().n_components();
    let (kc, _) = d.invariants()?;
    if kc.chi != 0 {
        return Err(Error::NonzeroEuler { chi: kc.chi });
    }
    if kc.balanced_rank().is_none() {
        return Err(Error::UnbalancedMultirank(kc.multirank.clone()));
    }
    let factors = graded_degree0(d)?;
    let mut entries = Vec::new();
    let mut component_counts = vec![0usize; n];
    for f in factors {
        match f {
            JHFactor::StableLineBundle(l) => entries.push(ModuliEntry::Smooth(l)),
            JHFactor::MinusOneOnComponent(i) => component_counts[i] += 1,
        }
    }
    let blocks = component_counts[0];
    if component_counts.iter().any(|&c| c != blocks) {
        return Err(Error::Inconsistent(format!(
            "component sheaf factors do not fill whole cycles: counts {component_counts:?}"
        )));
    }
    entries.extend(std::iter::repeat(ModuliEntry::NodePoint).take(blocks));
    ModuliPointE1::new(entries)
}

/// A representative of the S-class over a moduli point: one stable line
/// bundle per smooth entry, and the full family of degree minus-one
/// component sheaves per node entry.
pub fn phi_bar(p: &ModuliPointE1, curve: &CycleCurve) -> Result<SheafDescriptor> {
    require_multiple_components(curve)?;
    let n = curve.n_components();
    let mut summands = Vec::new();
    for e in p.entries() {
        match e {
            ModuliEntry::Smooth(l) => {
                summands.push(IndecomposableSheaf::vb(
                    1,
                    1,
                    CycleLineBundle::new(vec![0; n], *l)?,
                )?);
            }
            ModuliEntry::NodePoint => {
                for i in 0..n {
                    summands.push(IndecomposableSheaf::nlf(
                        ChainMap::new(1, i, n)?,
                        ChainLineBundle::new(vec![-1]),
                    )?);
                }
            }
        }
    }
    SheafDescriptor::new(curve.clone(), summands)
}

/// Which balanced rank-`r` degree-zero sheaves are stable: a torus worth
/// of line bundles when r is the total polarization degree, isolated
/// component sheaves when r matches single components, nothing else.
pub fn stable_locus(r: i64, curve: &CycleCurve) -> Result<StableLocusDescription> {
    require_multiple_components(curve)?;
    if r < 1 {
        return Err(Error::InvalidParameter(format!(
            "rank must be positive, got {r}"
        )));
    }
    if r == curve.total_degree() {
        return Ok(StableLocusDescription::KStarComponent);
    }
    let hits: Vec<usize> = curve
        .polarization()
        .iter()
        .enumerate()
        .filter(|(_, &h)| h == r)
        .map(|(i, _)| i)
        .collect();
    if hits.is_empty() {
        Ok(StableLocusDescription::Empty)
    } else {
        Ok(StableLocusDescription::IsolatedPoints(hits))
    }
}

/// Dimension of the moduli component of the given multirank.
pub fn component_dimension(multirank: &[i64], curve: &CycleCurve) -> Result<i64> {
    if multirank.len() != curve.n_components() {
        return Err(Error::LengthMismatch {
            expected: curve.n_components(),
            found: multirank.len(),
        });
    }
    Ok(*multirank.iter().min().expect("cycle is nonempty"))
}
