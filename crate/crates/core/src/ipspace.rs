//! Finite-dimensional inner product spaces over ℝ or ℂ.
//!
//! The inner product is linear in the first argument and conjugate-linear in
//! the second: `⟨a|b⟩ = Σ aᵢ·conj(bᵢ)`. Over ℝ this is the dot product.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::FiniteKernel;
use crate::report::real;
use crate::sincov::sincov_defect;
use crate::value::{AlgebraValue, ValueKind};

/// Vectors with a smaller norm are treated as zero when forming the
/// normalized Gram kernel, and are redrawn by the sampler.
pub const NONZERO_THRESHOLD: f64 = 1e-6;

/// Sweep margins must satisfy `margin ≥ −SWEEP_TOLERANCE·(1 + rhs)`.
pub const SWEEP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(Error::Vector(format!("unknown field {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IPVector {
    field: Field,
    coords: Vec<Complex64>,
}

impl IPVector {
    pub fn new(field: Field, coords: Vec<Complex64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::Vector("vector dimension must be at least 1".into()));
        }
        if coords.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Vector("vector has a non-finite coordinate".into()));
        }
        if field == Field::Real && coords.iter().any(|z| z.im != 0.0) {
            return Err(Error::Vector("real vector has an imaginary part".into()));
        }
        Ok(IPVector { field, coords })
    }

    pub fn real(coords: &[f64]) -> Result<Self> {
        Self::new(Field::Real, coords.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn complex(coords: &[Complex64]) -> Result<Self> {
        Self::new(Field::Complex, coords.to_vec())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coords.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Componentwise multiplication by a real scalar.
    pub fn scaled(&self, lambda: f64) -> Self {
        IPVector { field: self.field, coords: self.coords.iter().map(|z| z * lambda).collect() }
    }
}

/// `⟨a|b⟩`, conjugating the second argument. Callers check compatibility.
pub fn inner(a: &IPVector, b: &IPVector) -> Complex64 {
    a.coords.iter().zip(&b.coords).map(|(x, y)| x * y.conj()).sum()
}

fn compatible(vs: &[&IPVector]) -> Result<()> {
    let (field, dim) = (vs[0].field, vs[0].dim());
    for v in &vs[1..] {
        if v.field != field {
            return Err(Error::Vector("field mismatch".into()));
        }
        if v.dim() != dim {
            return Err(Error::Vector(format!("dimension mismatch: {} vs {}", dim, v.dim())));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    CauchySchwarz,
    Buzano,
    Richard,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityMargin {
    pub name: Inequality,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`
    pub margin: f64,
}

impl InequalityMargin {
    fn new(name: Inequality, lhs: f64, rhs: f64) -> Self {
        InequalityMargin { name, lhs, rhs, margin: rhs - lhs }
    }

    /// `margin / (1 + rhs)`, the quantity compared against the sweep tolerance.
    pub fn scaled_margin(&self) -> f64 {
        self.margin / (1.0 + self.rhs)
    }
}

/// The scalars both triple inequalities are built from.
struct TripleProducts {
    ax: Complex64,
    xb: Complex64,
    ab: Complex64,
    na: f64,
    nb: f64,
    xx: f64,
}

impl TripleProducts {
    fn new(a: &IPVector, b: &IPVector, x: &IPVector) -> Self {
        TripleProducts {
            ax: inner(a, x),
            xb: inner(x, b),
            ab: inner(a, b),
            na: a.norm(),
            nb: b.norm(),
            xx: x.norm_sqr(),
        }
    }

    fn richard(&self) -> InequalityMargin {
        let lhs = (self.ax * self.xb - self.ab * (0.5 * self.xx)).norm();
        let rhs = 0.5 * self.na * self.nb * self.xx;
        InequalityMargin::new(Inequality::Richard, lhs, rhs)
    }

    fn buzano(&self) -> InequalityMargin {
        let lhs = (self.ax * self.xb).norm();
        let rhs = 0.5 * (self.na * self.nb + self.ab.norm()) * self.xx;
        InequalityMargin::new(Inequality::Buzano, lhs, rhs)
    }
}

/// `|⟨a|x⟩⟨x|b⟩ − ⟨a|b⟩‖x‖²/2| ≤ ‖a‖‖b‖‖x‖²/2`
pub fn richard_margin(a: &IPVector, b: &IPVector, x: &IPVector) -> Result<InequalityMargin> {
    compatible(&[a, b, x])?;
    Ok(TripleProducts::new(a, b, x).richard())
}

/// `|⟨a|x⟩⟨x|b⟩| ≤ ½(‖a‖‖b‖ + |⟨a|b⟩|)‖x‖²`
pub fn buzano_margin(a: &IPVector, b: &IPVector, x: &IPVector) -> Result<InequalityMargin> {
    compatible(&[a, b, x])?;
    Ok(TripleProducts::new(a, b, x).buzano())
}

/// `|2⟨u|v⟩/(‖u‖‖v‖)| ≤ 2` for nonzero `u`, `v`.
pub fn cauchy_schwarz_margin(u: &IPVector, v: &IPVector) -> Result<InequalityMargin> {
    compatible(&[u, v])?;
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return Err(Error::Vector("Cauchy-Schwarz margin needs nonzero vectors".into()));
    }
    Ok(cauchy_schwarz_from(inner(u, v), nu, nv))
}

fn cauchy_schwarz_from(uv: Complex64, nu: f64, nv: f64) -> InequalityMargin {
    let lhs = (uv * 2.0 / (nu * nv)).norm();
    InequalityMargin::new(Inequality::CauchySchwarz, lhs, 2.0)
}

/// The kernel `F(u, v) = 2⟨u|v⟩/(‖u‖‖v‖)` on labels `v0, v1, …`.
///
/// Every entry has modulus at most 2 and the kernel's defect is at most 2.
pub fn normalized_gram(vectors: &[IPVector]) -> Result<FiniteKernel> {
    if vectors.is_empty() {
        return Err(Error::Vector("normalized_gram needs at least one vector".into()));
    }
    compatible(&vectors.iter().collect::<Vec<_>>())?;
    let norms: Vec<f64> = vectors.iter().map(IPVector::norm).collect();
    if let Some(i) = norms.iter().position(|&n| n <= NONZERO_THRESHOLD) {
        return Err(Error::Vector(format!("vector v{i} is zero (norm {})", norms[i])));
    }
    let labels = (0..vectors.len()).map(|i| format!("v{i}")).collect();
    FiniteKernel::from_fn(labels, ValueKind::Complex, |i, j| {
        AlgebraValue::Complex(inner(&vectors[i], &vectors[j]) * 2.0 / (norms[i] * norms[j]))
    })
}

/// Endless stream of seeded standard-normal vectors; real and imaginary
/// parts are drawn independently, coordinate by coordinate.
pub struct VectorSampler {
    rng: ChaCha8Rng,
    dim: usize,
    field: Field,
}

impl VectorSampler {
    pub fn new(dim: usize, field: Field, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Vector("dimension must be at least 1".into()));
        }
        Ok(VectorSampler { rng: ChaCha8Rng::seed_from_u64(seed), dim, field })
    }
}

impl Iterator for VectorSampler {
    type Item = IPVector;

    fn next(&mut self) -> Option<IPVector> {
        loop {
            let coords: Vec<Complex64> = (0..self.dim)
                .map(|_| {
                    let re: f64 = StandardNormal.sample(&mut self.rng);
                    let im: f64 = match self.field {
                        Field::Real => 0.0,
                        Field::Complex => StandardNormal.sample(&mut self.rng),
                    };
                    Complex64::new(re, im)
                })
                .collect();
            let v = IPVector { field: self.field, coords };
            if v.norm() >= NONZERO_THRESHOLD {
                return Some(v);
            }
        }
    }
}

pub fn sample_vectors(dim: usize, count: usize, field: Field, seed: u64) -> Result<Vec<IPVector>> {
    if count == 0 {
        return Err(Error::Vector("count must be at least 1".into()));
    }
    Ok(VectorSampler::new(dim, field, seed)?.take(count).collect())
}

/// JSON vector-list document: `{"field", "dim", "vectors"}` with complex
/// coordinates as `[re, im]` pairs.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorListDoc {
    field: Field,
    dim: usize,
    vectors: Vec<Vec<serde_json::Value>>,
}

pub fn save_vectors(vectors: &[IPVector]) -> Result<Vec<u8>> {
    let first = vectors.first().ok_or_else(|| Error::Vector("empty vector list".into()))?;
    compatible(&vectors.iter().collect::<Vec<_>>())?;
    let doc = VectorListDoc {
        field: first.field,
        dim: first.dim(),
        vectors: vectors
            .iter()
            .map(|v| {
                v.coords
                    .iter()
                    .map(|z| match first.field {
                        Field::Real => serde_json::json!(z.re),
                        Field::Complex => serde_json::json!([z.re, z.im]),
                    })
                    .collect()
            })
            .collect(),
    };
    Ok(crate::report::to_json_bytes(&doc))
}

pub fn load_vectors(bytes: &[u8]) -> Result<Vec<IPVector>> {
    let doc: VectorListDoc =
        serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
    doc.vectors
        .iter()
        .enumerate()
        .map(|(i, coords)| {
            if coords.len() != doc.dim {
                return Err(Error::Malformed(format!("vectors[{i}] has dimension {}", coords.len())));
            }
            let parsed = coords
                .iter()
                .enumerate()
                .map(|(j, c)| parse_coord(c, doc.field).ok_or_else(|| {
                    Error::Malformed(format!("vectors[{i}][{j}]: bad {:?} coordinate", doc.field))
                }))
                .collect::<Result<Vec<_>>>()?;
            IPVector::new(doc.field, parsed)
        })
        .collect()
}

fn parse_coord(v: &serde_json::Value, field: Field) -> Option<Complex64> {
    match field {
        Field::Real => v.as_f64().map(|x| Complex64::new(x, 0.0)),
        Field::Complex => {
            let pair = v.as_array().filter(|p| p.len() == 2)?;
            Some(Complex64::new(pair[0].as_f64()?, pair[1].as_f64()?))
        }
    }
}

/// Worst instance of one inequality over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarginSummary {
    pub name: String,
    /// Smallest raw `rhs − lhs`.
    #[serde(serialize_with = "real")]
    pub min_margin: f64,
    /// Smallest `(rhs − lhs)/(1 + rhs)`.
    #[serde(serialize_with = "real")]
    pub min_scaled_margin: f64,
    /// Triple index attaining `min_scaled_margin`.
    pub worst_index: u64,
    pub holds: bool,
}

impl MarginSummary {
    fn new(name: &str) -> Self {
        MarginSummary {
            name: name.to_string(),
            min_margin: f64::INFINITY,
            min_scaled_margin: f64::INFINITY,
            worst_index: 0,
            holds: true,
        }
    }

    fn push(&mut self, index: u64, margin: f64, rhs: f64) {
        let scaled = margin / (1.0 + rhs);
        self.min_margin = self.min_margin.min(margin);
        if scaled < self.min_scaled_margin || scaled.is_nan() {
            self.min_scaled_margin = scaled;
            self.worst_index = index;
        }
        self.holds = self.min_scaled_margin >= -SWEEP_TOLERANCE;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramSummary {
    pub vectors: usize,
    #[serde(serialize_with = "real")]
    pub defect: f64,
    #[serde(serialize_with = "real")]
    pub max_entry: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub field: Field,
    pub dim: usize,
    pub count: u64,
    pub seed: u64,
    pub margins: Vec<MarginSummary>,
    pub gram: GramSummary,
    pub pass: bool,
}

/// Number of vectors in the normalized-Gram family of a sweep.
pub const GRAM_FAMILY_SIZE: usize = 64;

/// Evaluates all three inequalities (and the triangle step from Richard to
/// Buzano) on `count` triples `(a, b, x)` taken consecutively from the
/// sampler stream, then checks the defect bound 2 on the normalized Gram
/// kernel of the first vectors of the same stream.
pub fn sweep(dim: usize, count: u64, field: Field, seed: u64) -> Result<SweepReport> {
    if count == 0 {
        return Err(Error::Vector("count must be at least 1".into()));
    }
    let mut cs = MarginSummary::new("cauchy_schwarz");
    let mut bz = MarginSummary::new("buzano");
    let mut rc = MarginSummary::new("richard");
    let mut tri = MarginSummary::new("richard_implies_buzano");

    // Vectors are drawn sequentially; margins for a block are evaluated in
    // parallel and folded in triple order.
    const BLOCK: u64 = 8192;
    let mut stream = VectorSampler::new(dim, field, seed)?;
    let mut start = 0u64;
    while start < count {
        let len = BLOCK.min(count - start);
        let block: Vec<IPVector> = stream.by_ref().take(3 * len as usize).collect();
        let rows: Vec<[(f64, f64); 4]> = block
            .par_chunks_exact(3)
            .map(|t| {
                let p = TripleProducts::new(&t[0], &t[1], &t[2]);
                let r = p.richard();
                let z = p.buzano();
                let c = cauchy_schwarz_from(p.ab, p.na, p.nb);
                // |⟨a|x⟩⟨x|b⟩| ≤ |⟨a|x⟩⟨x|b⟩ − ⟨a|b⟩‖x‖²/2| + |⟨a|b⟩|‖x‖²/2
                let bound = r.lhs + 0.5 * p.ab.norm() * p.xx;
                [(c.margin, c.rhs), (z.margin, z.rhs), (r.margin, r.rhs), (bound - z.lhs, bound)]
            })
            .collect();
        for (offset, row) in rows.iter().enumerate() {
            let i = start + offset as u64;
            for (summary, &(margin, rhs)) in [&mut cs, &mut bz, &mut rc, &mut tri].into_iter().zip(row) {
                summary.push(i, margin, rhs);
            }
        }
        start += len;
    }

    let family = GRAM_FAMILY_SIZE.min((3 * count).min(usize::MAX as u64) as usize);
    let vectors = sample_vectors(dim, family, field, seed)?;
    let gram = normalized_gram(&vectors)?;
    let defect = sincov_defect(&gram).defect;
    let max_entry = gram.max_abs();
    let gram = GramSummary {
        vectors: family,
        defect,
        max_entry,
        bound: 2.0,
        holds: defect <= 2.0 + SWEEP_TOLERANCE && max_entry <= 2.0 + SWEEP_TOLERANCE,
    };

    let margins = vec![cs, bz, rc, tri];
    let pass = margins.iter().all(|m| m.holds) && gram.holds;
    Ok(SweepReport { field, dim, count, seed, margins, gram, pass })
}
