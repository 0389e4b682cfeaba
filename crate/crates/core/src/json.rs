//! Serialization schemas and conversions. All JSON indices are 0-based;
//! parsing is strict and rejects unknown fields.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::curves::{ChainCurve, ChainMap, Curve, CycleCurve};
use crate::error::Error;
use crate::invariants::{ChainLineBundle, CycleLineBundle, LineBundle};
use crate::moduli::{ModuliEntry, ModuliPointE1};
use crate::sheaves::{IndecomposableSheaf, SheafDescriptor};
use crate::Result;

/// Exact rational as a reduced fraction with positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRepr {
    pub num: i64,
    pub den: i64,
}

impl RationalRepr {
    pub fn of(r: Rational64) -> Self {
        RationalRepr {
            num: *r.numer(),
            den: *r.denom(),
        }
    }

    pub fn to_rational(self) -> Result<Rational64> {
        if self.den == 0 {
            return Err(Error::Parse("rational with zero denominator".into()));
        }
        Ok(Rational64::new(self.num, self.den))
    }
}

/// Parses "p" or "p/q" into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational64> {
    let bad = || Error::Parse(format!("invalid rational {s:?}, expected p or p/q"));
    match s.split_once('/') {
        None => s.trim().parse::<i64>().map(Rational64::from).map_err(|_| bad()),
        Some((p, q)) => {
            let num: i64 = p.trim().parse().map_err(|_| bad())?;
            let den: i64 = q.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(num, den))
        }
    }
}

/// Curve shape: a cycle carries its polarization, a chain only a length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveRepr {
    Cycle { polarization: Vec<i64> },
    Chain { length: usize },
}

impl CurveRepr {
    pub fn of(curve: &Curve) -> Self {
        match curve {
            Curve::Cycle(c) => CurveRepr::Cycle {
                polarization: c.polarization().to_vec(),
            },
            Curve::Chain(c) => CurveRepr::Chain { length: c.length() },
        }
    }

    pub fn to_curve(&self) -> Result<Curve> {
        match self {
            CurveRepr::Cycle { polarization } => {
                Ok(Curve::Cycle(CycleCurve::new(polarization.clone())?))
            }
            CurveRepr::Chain { length } => Ok(Curve::Chain(ChainCurve::new(*length)?)),
        }
    }
}

/// A line bundle: the gluing constant is present exactly on cycles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineBundleRepr {
    pub multidegree: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<RationalRepr>,
}

impl LineBundleRepr {
    pub fn of(lb: &LineBundle) -> Self {
        match lb {
            LineBundle::Cycle(b) => LineBundleRepr {
                multidegree: b.multidegree().to_vec(),
                gluing: Some(RationalRepr::of(b.gluing())),
            },
            LineBundle::Chain(b) => LineBundleRepr {
                multidegree: b.multidegree().to_vec(),
                gluing: None,
            },
        }
    }

    pub fn to_line_bundle(&self) -> Result<LineBundle> {
        match self.gluing {
            Some(g) => Ok(LineBundle::Cycle(CycleLineBundle::new(
                self.multidegree.clone(),
                g.to_rational()?,
            )?)),
            None => Ok(LineBundle::Chain(ChainLineBundle::new(
                self.multidegree.clone(),
            ))),
        }
    }
}

/// One summand of a descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SummandRepr {
    Vb {
        cover: usize,
        m: i64,
        multidegree: Vec<i64>,
        gluing: RationalRepr,
    },
    Nlf {
        length: usize,
        start: usize,
        multidegree: Vec<i64>,
    },
}

impl SummandRepr {
    pub fn of(s: &IndecomposableSheaf) -> Self {
        match s {
            IndecomposableSheaf::Vb { cover, m, bundle } => SummandRepr::Vb {
                cover: *cover,
                m: *m,
                multidegree: bundle.multidegree().to_vec(),
                gluing: RationalRepr::of(bundle.gluing()),
            },
            IndecomposableSheaf::Nlf { map, bundle } => SummandRepr::Nlf {
                length: map.length(),
                start: map.start(),
                multidegree: bundle.multidegree().to_vec(),
            },
        }
    }

    pub fn to_summand(&self, host_components: usize) -> Result<IndecomposableSheaf> {
        match self {
            SummandRepr::Vb {
                cover,
                m,
                multidegree,
                gluing,
            } => IndecomposableSheaf::vb(
                *cover,
                *m,
                CycleLineBundle::new(multidegree.clone(), gluing.to_rational()?)?,
            ),
            SummandRepr::Nlf {
                length,
                start,
                multidegree,
            } => IndecomposableSheaf::nlf(
                ChainMap::new(*length, *start, host_components)?,
                ChainLineBundle::new(multidegree.clone()),
            ),
        }
    }
}

/// A sheaf descriptor: host cycle plus summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorRepr {
    pub curve: CurveRepr,
    pub summands: Vec<SummandRepr>,
}

impl DescriptorRepr {
    pub fn of(d: &SheafDescriptor) -> Self {
        DescriptorRepr {
            curve: CurveRepr::Cycle {
                polarization: d.host().polarization().to_vec(),
            },
            summands: d.summands().iter().map(SummandRepr::of).collect(),
        }
    }

    pub fn to_descriptor(&self) -> Result<SheafDescriptor> {
        let host = match self.curve.to_curve()? {
            Curve::Cycle(c) => c,
            Curve::Chain(_) => {
                return Err(Error::Parse(
                    "descriptor curve must be a cycle, not a chain".into(),
                ))
            }
        };
        let summands = self
            .summands
            .iter()
            .map(|s| s.to_summand(host.n_components()))
            .collect::<Result<Vec<_>>>()?;
        SheafDescriptor::new(host, summands)
    }
}

/// Reads a descriptor from its JSON form.
pub fn descriptor_from_json(s: &str) -> Result<SheafDescriptor> {
    let repr: DescriptorRepr =
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    repr.to_descriptor()
}

/// Writes a descriptor as pretty-printed JSON.
pub fn descriptor_to_json(d: &SheafDescriptor) -> String {
    serde_json::to_string_pretty(&DescriptorRepr::of(d)).expect("descriptor serializes")
}

/// One entry group of a moduli point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum PointRepr {
    Smooth { lambda: RationalRepr },
    Node { mult: usize },
}

/// A moduli point: smooth entries listed individually in sorted order,
/// node entries aggregated with their multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuliPointRepr {
    pub points: Vec<PointRepr>,
}

impl ModuliPointRepr {
    pub fn of(p: &ModuliPointE1) -> Self {
        let mut points = Vec::new();
        let mut node_mult = 0usize;
        for e in p.entries() {
            match e {
                ModuliEntry::Smooth(l) => points.push(PointRepr::Smooth {
                    lambda: RationalRepr::of(*l),
                }),
                ModuliEntry::NodePoint => node_mult += 1,
            }
        }
        if node_mult > 0 {
            points.push(PointRepr::Node { mult: node_mult });
        }
        ModuliPointRepr { points }
    }

    pub fn to_moduli_point(&self) -> Result<ModuliPointE1> {
        let mut entries = Vec::new();
        for p in &self.points {
            match p {
                PointRepr::Smooth { lambda } => {
                    entries.push(ModuliEntry::Smooth(lambda.to_rational()?));
                }
                PointRepr::Node { mult } => {
                    if *mult == 0 {
                        return Err(Error::Parse("node entry with zero multiplicity".into()));
                    }
                    entries.extend(std::iter::repeat(ModuliEntry::NodePoint).take(*mult));
                }
            }
        }
        ModuliPointE1::new(entries)
    }
}

/// Reads a moduli point from its JSON form.
pub fn moduli_point_from_json(s: &str) -> Result<ModuliPointE1> {
    let repr: ModuliPointRepr =
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    repr.to_moduli_point()
}

/// Writes a moduli point as pretty-printed JSON.
pub fn moduli_point_to_json(p: &ModuliPointE1) -> String {
    serde_json::to_string_pretty(&ModuliPointRepr::of(p)).expect("moduli point serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    fn sample_descriptor() -> SheafDescriptor {
        let host = CycleCurve::new(vec![1, 2]).unwrap();
        let summands = vec![
            IndecomposableSheaf::vb(
                2,
                1,
                CycleLineBundle::new(vec![1, -1, 0, 0], rat(3, 2)).unwrap(),
            )
            .unwrap(),
            IndecomposableSheaf::nlf(
                ChainMap::new(3, 1, 2).unwrap(),
                ChainLineBundle::new(vec![0, -1, 0]),
            )
            .unwrap(),
        ];
        SheafDescriptor::new(host, summands).unwrap()
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-5").unwrap(), rat(-5, 1));
        assert_eq!(parse_rational("1/-2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational(" 7 / 3 ").unwrap(), rat(7, 3));
        assert!(parse_rational("7/0").is_err());
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1/2/3").is_err());
    }

    #[test]
    fn rational_repr_is_canonical() {
        let repr = RationalRepr::of(rat(2, 4));
        assert_eq!((repr.num, repr.den), (1, 2));
        let repr = RationalRepr::of(rat(3, -9));
        assert_eq!((repr.num, repr.den), (-1, 3));
        assert!(RationalRepr { num: 1, den: 0 }.to_rational().is_err());
    }

    #[test]
    fn descriptor_json_roundtrip() {
        let d = sample_descriptor();
        let json = descriptor_to_json(&d);
        assert_eq!(descriptor_from_json(&json).unwrap(), d);
    }

    #[test]
    fn descriptor_json_shape() {
        let json = r#"{
            "curve": {"kind": "cycle", "polarization": [1, 1]},
            "summands": [
                {"kind": "vb", "cover": 1, "m": 2, "multidegree": [1, -1],
                 "gluing": {"num": 1, "den": 1}},
                {"kind": "nlf", "length": 2, "start": 0, "multidegree": [0, -1]}
            ]
        }"#;
        let d = descriptor_from_json(json).unwrap();
        assert_eq!(d.host().polarization(), &[1, 1]);
        assert_eq!(d.summands().len(), 2);
        let (kc, md) = d.invariants().unwrap();
        assert_eq!(kc.multirank, vec![3, 3]);
        assert_eq!(kc.chi, 0);
        assert_eq!(md, vec![2, -3]);
    }

    #[test]
    fn descriptor_json_is_strict() {
        assert!(descriptor_from_json(r#"{"summands": []}"#).is_err());
        assert!(descriptor_from_json(
            r#"{"curve": {"kind": "chain", "length": 2}, "summands": []}"#
        )
        .is_err());
        assert!(descriptor_from_json(
            r#"{"curve": {"kind": "cycle", "polarization": [1, 1]},
                "summands": [], "extra": 1}"#
        )
        .is_err());
        assert!(descriptor_from_json(
            r#"{"curve": {"kind": "cycle", "polarization": [1, 1]},
                "summands": [{"kind": "vb", "cover": 1, "m": 1,
                              "multidegree": [0, 0],
                              "gluing": {"num": 1, "den": 0}}]}"#
        )
        .is_err());
        assert!(descriptor_from_json(
            r#"{"curve": {"kind": "cycle", "polarization": [1, 1]},
                "summands": [{"kind": "tor", "length": 1}]}"#
        )
        .is_err());
    }

    #[test]
    fn curve_repr_roundtrip() {
        let cycle = Curve::Cycle(CycleCurve::new(vec![2, 1, 1]).unwrap());
        let chain = Curve::Chain(ChainCurve::new(4).unwrap());
        for c in [cycle, chain] {
            let repr = CurveRepr::of(&c);
            assert_eq!(repr.to_curve().unwrap(), c);
        }
    }

    #[test]
    fn line_bundle_repr_roundtrip() {
        let cyc = LineBundle::Cycle(CycleLineBundle::new(vec![2, -2], rat(5, 3)).unwrap());
        let chn = LineBundle::Chain(ChainLineBundle::new(vec![0, -1]));
        for lb in [cyc, chn] {
            let repr = LineBundleRepr::of(&lb);
            assert_eq!(repr.to_line_bundle().unwrap(), lb);
        }
        let json = serde_json::to_string(&LineBundleRepr::of(&LineBundle::Chain(
            ChainLineBundle::new(vec![-1]),
        )))
        .unwrap();
        assert!(!json.contains("gluing"));
    }

    #[test]
    fn moduli_point_json_roundtrip() {
        let p = ModuliPointE1::new(vec![
            ModuliEntry::Smooth(rat(3, 2)),
            ModuliEntry::NodePoint,
            ModuliEntry::NodePoint,
            ModuliEntry::Smooth(rat(-5, 1)),
        ])
        .unwrap();
        let json = moduli_point_to_json(&p);
        assert_eq!(moduli_point_from_json(&json).unwrap(), p);
        let repr = ModuliPointRepr::of(&p);
        assert_eq!(
            repr.points.last(),
            Some(&PointRepr::Node { mult: 2 })
        );
    }

    #[test]
    fn moduli_point_json_shape() {
        let json = r#"{"points": [
            {"type": "smooth", "lambda": {"num": 7, "den": 2}},
            {"type": "node", "mult": 1}
        ]}"#;
        let p = moduli_point_from_json(json).unwrap();
        assert_eq!(
            p.entries(),
            &[ModuliEntry::Smooth(rat(7, 2)), ModuliEntry::NodePoint]
        );
        assert!(moduli_point_from_json(r#"{"points": [{"type": "node", "mult": 0}]}"#).is_err());
        assert!(moduli_point_from_json(r#"{"points": []}"#).is_err());
    }
}
