//! Curve and group-data files.

use std::path::Path;

use galois_core::algebra::{parse_rat, AlgebraError, Ring, TriPoly, QI};
use galois_core::curve::{CurveError, CurveSpec};
use galois_core::partitions::Partition;
use galois_core::permgroup::Perm;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("factor {factor}: bad coefficient {value:?}")]
    Coefficient { factor: usize, value: String },
    #[error("factor {factor}: term exponents {exps:?} do not sum to the degree {degree}")]
    NonHomogeneous { factor: usize, exps: [u32; 3], degree: u32 },
    #[error("degree_total {declared} differs from the sum of factor degrees {actual}")]
    DegreeTotal { declared: u32, actual: u32 },
    #[error("factor {0} has no nonzero terms")]
    ZeroFactor(usize),
    #[error("non-reduced: the curve has a repeated component")]
    NonReduced,
    #[error("invalid curve: {0}")]
    Curve(CurveError),
    #[error("invalid group data: {0}")]
    Group(String),
}

impl InputError {
    /// Short stable tag for scripts.
    pub fn code(&self) -> &'static str {
        match self {
            InputError::Io { .. } => "io",
            InputError::Json(_) => "malformed-json",
            InputError::Coefficient { .. } => "bad-coefficient",
            InputError::NonHomogeneous { .. } => "non-homogeneous",
            InputError::DegreeTotal { .. } => "degree-mismatch",
            InputError::ZeroFactor(_) => "zero-factor",
            InputError::NonReduced => "non-reduced",
            InputError::Curve(_) => "invalid-curve",
            InputError::Group(_) => "invalid-group",
        }
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.display().to_string(), source })
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CoeffJson {
    pub num: String,
    #[serde(default = "one")]
    pub den: String,
    #[serde(default = "zero")]
    pub inum: String,
    #[serde(default = "one")]
    pub iden: String,
}

fn one() -> String {
    "1".into()
}

fn zero() -> String {
    "0".into()
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct TermJson {
    pub exps: [u32; 3],
    pub coeff: CoeffJson,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct FactorJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CurveJson {
    pub degree_total: u32,
    pub factors: Vec<FactorJson>,
}

impl CoeffJson {
    pub fn from_qi(c: &QI) -> Self {
        let (re, im) = (&c.re, &c.im);
        CoeffJson { num: re.numer().to_string(), den: re.denom().to_string(), inum: im.numer().to_string(), iden: im.denom().to_string() }
    }

    fn to_qi(&self, factor: usize) -> Result<QI, InputError> {
        let bad = |v: &str| InputError::Coefficient { factor, value: v.to_string() };
        let int = |v: &str| parse_rat(v).filter(|r| r.is_integer()).ok_or_else(|| bad(v));
        let (n, d, i, j) = (int(&self.num)?, int(&self.den)?, int(&self.inum)?, int(&self.iden)?);
        if QI::real(d.clone()).is_zero() {
            return Err(bad(&self.den));
        }
        if QI::real(j.clone()).is_zero() {
            return Err(bad(&self.iden));
        }
        Ok(QI::new(n / d, i / j))
    }
}

impl CurveJson {
    pub fn from_curve(curve: &CurveSpec) -> Self {
        let factors = curve
            .factors()
            .iter()
            .map(|f| FactorJson {
                degree: f.degree(),
                terms: f.terms().map(|(e, c)| TermJson { exps: *e, coeff: CoeffJson::from_qi(c) }).collect(),
            })
            .collect();
        CurveJson { degree_total: curve.degree(), factors }
    }

    pub fn to_curve(&self) -> Result<CurveSpec, InputError> {
        let mut factors = Vec::with_capacity(self.factors.len());
        for (k, f) in self.factors.iter().enumerate() {
            let mut terms = Vec::with_capacity(f.terms.len());
            for t in &f.terms {
                if t.exps.iter().sum::<u32>() != f.degree {
                    return Err(InputError::NonHomogeneous { factor: k, exps: t.exps, degree: f.degree });
                }
                terms.push((t.exps, t.coeff.to_qi(k)?));
            }
            let p = TriPoly::new(f.degree, terms).map_err(|e| match e {
                AlgebraError::NotHomogeneous { found, .. } => InputError::NonHomogeneous { factor: k, exps: found, degree: f.degree },
                _ => InputError::ZeroFactor(k),
            })?;
            if p.is_zero() {
                return Err(InputError::ZeroFactor(k));
            }
            factors.push(p);
        }
        let actual: u32 = self.factors.iter().map(|f| f.degree).sum();
        if actual != self.degree_total {
            return Err(InputError::DegreeTotal { declared: self.degree_total, actual });
        }
        CurveSpec::new(factors).map_err(|e| match e {
            CurveError::NonReduced => InputError::NonReduced,
            CurveError::ZeroFactor(k) => InputError::ZeroFactor(k),
            other => InputError::Curve(other),
        })
    }
}

pub fn parse_curve(text: &str) -> Result<CurveSpec, InputError> {
    serde_json::from_str::<CurveJson>(text)?.to_curve()
}

pub fn load_curve(path: &Path) -> Result<CurveSpec, InputError> {
    parse_curve(&read(path)?)
}

/// Parses `"x,y,z"` with rational or decimal entries.
pub fn parse_point(s: &str) -> Option<[QI; 3]> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return None;
    }
    let mut out: [QI; 3] = Default::default();
    for (o, p) in out.iter_mut().zip(parts) {
        *o = QI::parse_real(p)?;
    }
    Some(out)
}

/// Generators as 1-based image arrays, either bare or with a degree.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GeneratorsJson {
    Bare(Vec<Vec<usize>>),
    WithDegree { degree: usize, generators: Vec<Vec<usize>> },
}

/// One partition family per non-transposition generator, in generator
/// order, plus an optional candidate partition. Blocks are 1-based.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct PartitionsJson {
    #[serde(default)]
    pub families: Vec<Vec<Vec<Vec<usize>>>>,
    #[serde(default)]
    pub candidate: Option<Vec<Vec<usize>>>,
}

pub struct GroupData {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub families: Vec<Vec<Partition>>,
    pub candidate: Option<Partition>,
}

pub fn parse_group_data(gens: &str, parts: &str) -> Result<GroupData, InputError> {
    let (degree, raw) = match serde_json::from_str::<GeneratorsJson>(gens)? {
        GeneratorsJson::Bare(g) => (g.first().map_or(0, Vec::len), g),
        GeneratorsJson::WithDegree { degree, generators } => (degree, generators),
    };
    let mut generators = Vec::with_capacity(raw.len());
    for (k, g) in raw.iter().enumerate() {
        if g.len() != degree {
            return Err(InputError::Group(format!("generator {} has {} images, expected {degree}", k + 1, g.len())));
        }
        generators.push(Perm::from_images_1based(g).map_err(|e| InputError::Group(format!("generator {}: {e}", k + 1)))?);
    }
    let p: PartitionsJson = serde_json::from_str(parts)?;
    let partition = |blocks: &[Vec<usize>]| Partition::from_blocks_1based(degree, blocks).map_err(|e| InputError::Group(e.to_string()));
    let families = p.families.iter().map(|f| f.iter().map(|b| partition(b)).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()?;
    let candidate = p.candidate.as_deref().map(partition).transpose()?;
    Ok(GroupData { degree, generators, families, candidate })
}

pub fn load_group_data(gens: &Path, parts: &Path) -> Result<GroupData, InputError> {
    parse_group_data(&read(gens)?, &read(parts)?)
}
