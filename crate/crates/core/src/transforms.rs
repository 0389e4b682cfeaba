//! Induced action of the derived equivalences on Hilbert classes and
//! K-classes: the two reflection functors, the two degree translations,
//! line-bundle twists, and the associated WIT-index test.

use std::fmt;

use num_rational::Rational64;

use crate::error::Error;
use crate::invariants::{HilbertClass, KClass, Multidegree, Slope};
use crate::Result;

/// One move in a transform sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TransformSymbol {
    Phi,
    PhiHat,
    Psi,
    PsiHat,
    Twist(Multidegree),
}

impl fmt::Display for TransformSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSymbol::Phi => write!(f, "phi"),
            TransformSymbol::PhiHat => write!(f, "phihat"),
            TransformSymbol::Psi => write!(f, "psi"),
            TransformSymbol::PsiHat => write!(f, "psihat"),
            TransformSymbol::Twist(md) => {
                write!(f, "twist:")?;
                for (i, d) in md.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                Ok(())
            }
        }
    }
}

/// Which cohomology of the transform survives: index 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitIndex {
    Zero,
    One,
}

impl WitIndex {
    pub fn value(self) -> u8 {
        match self {
            WitIndex::Zero => 0,
            WitIndex::One => 1,
        }
    }
}

impl fmt::Display for WitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn check_h(h: i64) -> Result<()> {
    if h < 1 {
        return Err(Error::InvalidParameter(format!(
            "polarization degree must be positive, got {h}"
        )));
    }
    Ok(())
}

/// Action on the total Hilbert class (r, d). Classes of shifted complexes
/// with negative coefficients pass through unchanged in meaning, so no
/// validity is required of the input.
pub fn apply_total(t: &TransformSymbol, hc: HilbertClass, h: i64) -> Result<HilbertClass> {
    check_h(h)?;
    let HilbertClass { r, d } = hc;
    match t {
        TransformSymbol::Phi => Ok(HilbertClass::new(d * h - r, -d)),
        TransformSymbol::PhiHat => Ok(HilbertClass::new(d * h + r, d)),
        TransformSymbol::Psi => Ok(HilbertClass::new(r, d + r)),
        TransformSymbol::PsiHat => Ok(HilbertClass::new(r, d - r)),
        TransformSymbol::Twist(_) => Err(Error::TwistInTotalSequence),
    }
}

/// Twist by a line bundle of the given multidegree: multirank is fixed,
/// the Euler characteristic shifts by the rank-weighted degree.
pub fn apply_twist(md: &[i64], kc: &KClass) -> Result<KClass> {
    if md.len() != kc.len() {
        return Err(Error::LengthMismatch {
            expected: kc.len(),
            found: md.len(),
        });
    }
    let shift: i64 = kc.multirank.iter().zip(md).map(|(r, d)| r * d).sum();
    Ok(KClass::new(kc.multirank.clone(), kc.chi + shift))
}

/// Action on a balanced class (common component rank rbar, Euler
/// characteristic d). The reflection keeps the output a sheaf class by
/// folding in the shift when d <= rbar.
pub fn apply_balanced(t: &TransformSymbol, rbar: i64, d: i64, h: i64) -> Result<(i64, i64)> {
    check_h(h)?;
    if rbar < 0 {
        return Err(Error::InvalidParameter(format!(
            "balanced rank must be nonnegative, got {rbar}"
        )));
    }
    match t {
        TransformSymbol::Phi => {
            if d > rbar {
                Ok((d - rbar, -d))
            } else {
                Ok((rbar - d, d))
            }
        }
        TransformSymbol::Psi => Ok((rbar, rbar * h + d)),
        other => Err(Error::InvalidParameter(format!(
            "balanced action is defined for phi and psi only, got {other}"
        ))),
    }
}

/// WIT index of a semistable class of the given slope under a reflection.
/// Semistability of the underlying sheaf is the caller's responsibility.
pub fn wit_index(t: &TransformSymbol, s: Slope, h: i64) -> Result<WitIndex> {
    check_h(h)?;
    let threshold = |num: i64| Slope::Finite(Rational64::new(num, h));
    match t {
        TransformSymbol::Phi => Ok(if s > threshold(1) {
            WitIndex::Zero
        } else {
            WitIndex::One
        }),
        TransformSymbol::PhiHat => Ok(if s > threshold(-1) {
            WitIndex::Zero
        } else {
            WitIndex::One
        }),
        other => Err(Error::InvalidParameter(format!(
            "WIT index is defined for phi and phihat only, got {other}"
        ))),
    }
}

/// Left-to-right composition of total-level moves.
pub fn compose_total(seq: &[TransformSymbol], hc: HilbertClass, h: i64) -> Result<HilbertClass> {
    check_h(h)?;
    seq.iter().try_fold(hc, |acc, t| apply_total(t, acc, h))
}

/// Parses a comma-separated move string. Twist degrees run until the next
/// non-numeric token, so "phi,twist:1,-2,psi" is phi, twist (1,-2), psi.
pub fn parse_transform_sequence(input: &str) -> Result<Vec<TransformSymbol>> {
    let mut out = Vec::new();
    let mut pending_twist: Option<Vec<i64>> = None;
    for token in input.split(',') {
        let token = token.trim();
        if token.is_empty() {
            return Err(Error::Parse("empty transform token".into()));
        }
        if let Some(md) = pending_twist.as_mut() {
            if let Ok(d) = token.parse::<i64>() {
                md.push(d);
                continue;
            }
            out.push(TransformSymbol::Twist(pending_twist.take().unwrap()));
        }
        match token {
            "phi" => out.push(TransformSymbol::Phi),
            "phihat" => out.push(TransformSymbol::PhiHat),
            "psi" => out.push(TransformSymbol::Psi),
            "psihat" => out.push(TransformSymbol::PsiHat),
            _ => {
                if let Some(rest) = token.strip_prefix("twist:") {
                    let first = rest.parse::<i64>().map_err(|_| {
                        Error::Parse(format!("invalid twist degree {rest:?}"))
                    })?;
                    pending_twist = Some(vec![first]);
                } else {
                    return Err(Error::Parse(format!("unknown transform token {token:?}")));
                }
            }
        }
    }
    if let Some(md) = pending_twist.take() {
        out.push(TransformSymbol::Twist(md));
    }
    if out.is_empty() {
        return Err(Error::Parse("empty transform sequence".into()));
    }
    Ok(out)
}
