//! Parametric joint sources and two-way channels, with seeded samplers.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TwcError};
use crate::info_measures::{binary_entropy, check_qary, PROB_SUM_TOL};
use crate::rng::{stream_rng, StreamRng};

/// A source, channel-input or channel-output symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Symbol {
    Index(u32),
    Real(f64),
}

impl Symbol {
    pub fn index(self) -> Result<u32> {
        match self {
            Symbol::Index(i) => Ok(i),
            Symbol::Real(x) => Err(TwcError::domain(format!("expected a discrete symbol, got {x}"))),
        }
    }

    pub fn real(self) -> Result<f64> {
        match self {
            Symbol::Real(x) => Ok(x),
            Symbol::Index(i) => Err(TwcError::domain(format!("expected a real symbol, got index {i}"))),
        }
    }
}

/// Which way information flows. `OneToTwo` carries `U1` to terminal 2
/// through `Y2`; its distortion is `D1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    OneToTwo,
    TwoToOne,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::OneToTwo, Direction::TwoToOne];

    pub fn label(self) -> &'static str {
        match self {
            Direction::OneToTwo => "1->2",
            Direction::TwoToOne => "2->1",
        }
    }
}

/// The terminal doing the encoding or decoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Terminal {
    One,
    Two,
}

/// Symbol alphabet of a source or channel port.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Alphabet {
    Finite(u32),
    Real,
}

impl Alphabet {
    fn contains(self, s: Symbol) -> bool {
        match (self, s) {
            (Alphabet::Finite(n), Symbol::Index(i)) => i < n,
            (Alphabet::Real, Symbol::Real(x)) => x.is_finite(),
            _ => false,
        }
    }
}

/// Per-letter distortion measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionMeasure {
    Hamming,
    SquaredError,
}

impl DistortionMeasure {
    pub fn distortion(self, u: Symbol, estimate: Symbol) -> Result<f64> {
        match self {
            DistortionMeasure::Hamming => match (u, estimate) {
                (Symbol::Index(a), Symbol::Index(b)) => Ok(if a == b { 0.0 } else { 1.0 }),
                _ => Err(TwcError::domain("Hamming distortion needs discrete symbols")),
            },
            DistortionMeasure::SquaredError => {
                let e = u.real()? - estimate.real()?;
                Ok(e * e)
            }
        }
    }
}

/// The three correlated source families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JointSourceModel {
    /// Uniform bits with `U2 = U1 xor W`, `W ~ Bern(delta)`.
    BinarySymmetric { delta: f64 },
    /// Independent uniform symbols on `{0, .., q-1}`.
    UniformQary { q: u32 },
    /// Zero-mean, unit-variance jointly Gaussian pair.
    BivariateGaussian { rho: f64 },
}

impl JointSourceModel {
    pub fn binary_symmetric(delta: f64) -> Result<Self> {
        let m = JointSourceModel::BinarySymmetric { delta };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform_qary(q: u32) -> Result<Self> {
        let m = JointSourceModel::UniformQary { q };
        m.validate()?;
        Ok(m)
    }

    pub fn bivariate_gaussian(rho: f64) -> Result<Self> {
        let m = JointSourceModel::BivariateGaussian { rho };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            JointSourceModel::BinarySymmetric { delta } if !(0.0..=0.5).contains(&delta) => {
                Err(TwcError::domain(format!("delta = {delta} is not in [0, 1/2]")))
            }
            JointSourceModel::UniformQary { q } if q < 2 => {
                Err(TwcError::domain(format!("q = {q} must be at least 2")))
            }
            JointSourceModel::BivariateGaussian { rho } if !(-1.0..=1.0).contains(&rho) => {
                Err(TwcError::domain(format!("rho = {rho} is not in [-1, 1]")))
            }
            _ => Ok(()),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        match *self {
            JointSourceModel::BinarySymmetric { .. } => Alphabet::Finite(2),
            JointSourceModel::UniformQary { q } => Alphabet::Finite(q),
            JointSourceModel::BivariateGaussian { .. } => Alphabet::Real,
        }
    }

    /// Hamming for the discrete families, squared error for the Gaussian.
    pub fn distortion_measure(&self) -> DistortionMeasure {
        match self {
            JointSourceModel::BivariateGaussian { .. } => DistortionMeasure::SquaredError,
            _ => DistortionMeasure::Hamming,
        }
    }

    /// Correlation coefficient of `(U1, U2)`.
    pub fn correlation(&self) -> f64 {
        match *self {
            JointSourceModel::BinarySymmetric { delta } => 1.0 - 2.0 * delta,
            JointSourceModel::UniformQary { .. } => 0.0,
            JointSourceModel::BivariateGaussian { rho } => rho,
        }
    }

    /// One `(u1, u2)` draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (Symbol, Symbol) {
        match *self {
            JointSourceModel::BinarySymmetric { delta } => {
                let u1 = rng.gen_range(0..2u32);
                let flip = u32::from(rng.gen::<f64>() < delta);
                (Symbol::Index(u1), Symbol::Index(u1 ^ flip))
            }
            JointSourceModel::UniformQary { q } => {
                (Symbol::Index(rng.gen_range(0..q)), Symbol::Index(rng.gen_range(0..q)))
            }
            JointSourceModel::BivariateGaussian { rho } => {
                let a: f64 = rng.sample(StandardNormal);
                let b: f64 = rng.sample(StandardNormal);
                (Symbol::Real(a), Symbol::Real(rho * a + (1.0 - rho * rho).max(0.0).sqrt() * b))
            }
        }
    }
}

/// `k` i.i.d. source pairs from the stream `(seed, 0, 0)`.
pub fn sample_source(model: &JointSourceModel, k: usize, seed: u64) -> Result<Vec<(Symbol, Symbol)>> {
    if k == 0 {
        return Err(TwcError::domain("sample count must be at least 1"));
    }
    let mut rng = stream_rng(seed, 0, 0);
    Ok((0..k).map(|_| model.draw(&mut rng)).collect())
}

/// `I(U1; U2)` in bits; `+inf` for a fully correlated Gaussian pair.
pub fn source_mutual_information(model: &JointSourceModel) -> Result<f64> {
    model.validate()?;
    match *model {
        JointSourceModel::BinarySymmetric { delta } => Ok(1.0 - binary_entropy(delta)?),
        JointSourceModel::UniformQary { .. } => Ok(0.0),
        JointSourceModel::BivariateGaussian { rho } => {
            let rest = 1.0 - rho * rho;
            if rest <= 0.0 {
                Ok(f64::INFINITY)
            } else {
                Ok(-0.5 * rest.log2())
            }
        }
    }
}

/// Transition tensor `p(y1, y2 | x1, x2)` over finite alphabets.
///
/// Layout: `((x1 * n2 + x2) * m1 + y1) * m2 + y2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteTwc {
    n1: usize,
    n2: usize,
    m1: usize,
    m2: usize,
    table: Vec<f64>,
}

impl DiscreteTwc {
    pub fn new(n1: usize, n2: usize, m1: usize, m2: usize, table: Vec<f64>) -> Result<Self> {
        if n1 == 0 || n2 == 0 || m1 == 0 || m2 == 0 {
            return Err(TwcError::domain("channel alphabets must be non-empty"));
        }
        if table.len() != n1 * n2 * m1 * m2 {
            return Err(TwcError::domain(format!(
                "transition table has {} entries, expected {}",
                table.len(),
                n1 * n2 * m1 * m2
            )));
        }
        for (s, slice) in table.chunks(m1 * m2).enumerate() {
            if slice.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(TwcError::domain(format!("slice ({}, {}) has a negative entry", s / n2, s % n2)));
            }
            let total: f64 = slice.iter().sum();
            if (total - 1.0).abs() > PROB_SUM_TOL {
                return Err(TwcError::domain(format!(
                    "slice ({}, {}) sums to {total}",
                    s / n2,
                    s % n2
                )));
            }
        }
        Ok(DiscreteTwc { n1, n2, m1, m2, table })
    }

    /// Tensor form of the q-ary modulo-additive channel.
    pub fn qary_additive(q: u32, eps1: f64, eps2: f64) -> Result<Self> {
        check_qary(q, eps1)?;
        check_qary(q, eps2)?;
        let n = q as usize;
        let noise = |eps: f64, z: usize| if z == 0 { 1.0 - eps } else { eps / f64::from(q - 1) };
        let mut table = Vec::with_capacity(n.pow(4));
        for x1 in 0..n {
            for x2 in 0..n {
                let s = (x1 + x2) % n;
                for y1 in 0..n {
                    for y2 in 0..n {
                        let z1 = (y1 + n - s) % n;
                        let z2 = (y2 + n - s) % n;
                        table.push(noise(eps1, z1) * noise(eps2, z2));
                    }
                }
            }
        }
        // rounding can push a slice sum a few ulps off; exact renormalisation
        for slice in table.chunks_mut(n * n) {
            let t: f64 = slice.iter().sum();
            slice.iter_mut().for_each(|p| *p /= t);
        }
        DiscreteTwc::new(n, n, n, n, table)
    }

    /// `(|X1|, |X2|, |Y1|, |Y2|)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.n1, self.n2, self.m1, self.m2)
    }

    /// `p(., . | x1, x2)` flattened as `y1 * m2 + y2`.
    pub fn slice(&self, x1: usize, x2: usize) -> &[f64] {
        let w = self.m1 * self.m2;
        let start = (x1 * self.n2 + x2) * w;
        &self.table[start..start + w]
    }
}

/// The two-way channel families.
#[derive(Debug, Clone, PartialEq)]
pub enum TwcModel {
    /// `Y1 = X1 + X2 + Z1`, `Y2 = X1 + X2 + Z2` modulo `q`.
    QaryAdditive { q: u32, eps1: f64, eps2: f64 },
    /// `Y1 = X1 + X2 + Z1`, `Y2 = X1 + X2 + Z2` with Gaussian noise.
    /// `sigma1_sq` is the noise variance at terminal 1.
    Awgn { p1: f64, p2: f64, sigma1_sq: f64, sigma2_sq: f64 },
    GeneralDiscrete(DiscreteTwc),
}

impl TwcModel {
    pub fn qary_additive(q: u32, eps1: f64, eps2: f64) -> Result<Self> {
        let m = TwcModel::QaryAdditive { q, eps1, eps2 };
        m.validate()?;
        Ok(m)
    }

    pub fn awgn(p1: f64, p2: f64, sigma1_sq: f64, sigma2_sq: f64) -> Result<Self> {
        let m = TwcModel::Awgn { p1, p2, sigma1_sq, sigma2_sq };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            TwcModel::QaryAdditive { q, eps1, eps2 } => {
                check_qary(q, eps1)?;
                check_qary(q, eps2)
            }
            TwcModel::Awgn { p1, p2, sigma1_sq, sigma2_sq } => {
                for (name, v) in [("p1", p1), ("p2", p2), ("sigma1_sq", sigma1_sq), ("sigma2_sq", sigma2_sq)] {
                    if !(v.is_finite() && v > 0.0) {
                        return Err(TwcError::domain(format!("{name} = {v} must be positive")));
                    }
                }
                Ok(())
            }
            TwcModel::GeneralDiscrete(_) => Ok(()),
        }
    }

    /// SNR of terminal 1's signal at terminal 2, `p1 / sigma2_sq`.
    pub fn snr1(&self) -> Option<f64> {
        match *self {
            TwcModel::Awgn { p1, sigma2_sq, .. } => Some(p1 / sigma2_sq),
            _ => None,
        }
    }

    /// SNR of terminal 2's signal at terminal 1, `p2 / sigma1_sq`.
    pub fn snr2(&self) -> Option<f64> {
        match *self {
            TwcModel::Awgn { p2, sigma1_sq, .. } => Some(p2 / sigma1_sq),
            _ => None,
        }
    }

    /// Input alphabets `(X1, X2)`.
    pub fn input_alphabets(&self) -> (Alphabet, Alphabet) {
        match self {
            TwcModel::QaryAdditive { q, .. } => (Alphabet::Finite(*q), Alphabet::Finite(*q)),
            TwcModel::Awgn { .. } => (Alphabet::Real, Alphabet::Real),
            TwcModel::GeneralDiscrete(t) => (Alphabet::Finite(t.n1 as u32), Alphabet::Finite(t.n2 as u32)),
        }
    }

    /// One memoryless use of the channel. `Z1` is drawn before `Z2`.
    pub fn step(&self, x1: Symbol, x2: Symbol, rng: &mut StreamRng) -> Result<(Symbol, Symbol)> {
        let (a1, a2) = self.input_alphabets();
        if !a1.contains(x1) || !a2.contains(x2) {
            return Err(TwcError::domain(format!("inputs ({x1:?}, {x2:?}) outside channel alphabet")));
        }
        match *self {
            TwcModel::QaryAdditive { q, eps1, eps2 } => {
                let s = (x1.index()? + x2.index()?) % q;
                let z1 = qary_noise(q, eps1, rng);
                let z2 = qary_noise(q, eps2, rng);
                Ok((Symbol::Index((s + z1) % q), Symbol::Index((s + z2) % q)))
            }
            TwcModel::Awgn { sigma1_sq, sigma2_sq, .. } => {
                let s = x1.real()? + x2.real()?;
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                Ok((Symbol::Real(s + sigma1_sq.sqrt() * n1), Symbol::Real(s + sigma2_sq.sqrt() * n2)))
            }
            TwcModel::GeneralDiscrete(ref t) => {
                let slice = t.slice(x1.index()? as usize, x2.index()? as usize);
                let target: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = slice.len() - 1;
                for (j, &p) in slice.iter().enumerate() {
                    acc += p;
                    if target < acc {
                        pick = j;
                        break;
                    }
                }
                // rounding can leave the last bins short; skip zero-mass tails
                while slice[pick] == 0.0 && pick > 0 {
                    pick -= 1;
                }
                Ok((Symbol::Index((pick / t.m2) as u32), Symbol::Index((pick % t.m2) as u32)))
            }
        }
    }
}

/// Free-function form of [`TwcModel::step`].
pub fn channel_step(model: &TwcModel, x1: Symbol, x2: Symbol, rng: &mut StreamRng) -> Result<(Symbol, Symbol)> {
    model.step(x1, x2, rng)
}

fn qary_noise(q: u32, eps: f64, rng: &mut StreamRng) -> u32 {
    if rng.gen::<f64>() < eps {
        rng.gen_range(1..q)
    } else {
        0
    }
}
