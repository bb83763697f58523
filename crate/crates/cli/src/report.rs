//! Serializable report types. Exact values travel as strings so that
//! arbitrarily large integers and rationals survive a JSON round trip.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use tilecohom::exactalg::{AlgebraicNumber, IntPoly};
use tilecohom::frequency::{ConvergenceReport, FrequencyForm};
use tilecohom::regularity::RegularityCertificate;
use tilecohom::substitution::{PeriodicityVerdict, PerronData, Substitution};

/// Fractional digits in decimal renderings.
pub const DIGITS: u32 = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    /// Coefficients from the constant term up.
    pub coeffs: Vec<String>,
    pub text: String,
}

impl From<&IntPoly> for PolyJson {
    fn from(p: &IntPoly) -> Self {
        PolyJson {
            coeffs: p.coeffs().iter().map(BigInt::to_string).collect(),
            text: p.to_string(),
        }
    }
}

/// An element of `Q(lambda)` in the power basis of the generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicJson {
    pub minpoly: Vec<String>,
    /// `"num/den"` per power of the generator.
    pub coords: Vec<String>,
    pub text: String,
    pub decimal: String,
    pub width: String,
}

impl From<&AlgebraicNumber> for AlgebraicJson {
    fn from(x: &AlgebraicNumber) -> Self {
        let (decimal, width) = x.decimal(DIGITS);
        AlgebraicJson {
            minpoly: x
                .field()
                .minpoly()
                .coeffs()
                .iter()
                .map(BigInt::to_string)
                .collect(),
            coords: x.coords().iter().map(rat_string).collect(),
            text: x.to_string(),
            decimal,
            width: rat_string(&width),
        }
    }
}

/// `"num/den"` with a positive denominator, always including the slash.
pub fn rat_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rat(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let d: BigInt = d.parse().ok()?;
    let n: BigInt = n.parse().ok()?;
    (d != BigInt::from(0)).then(|| BigRational::new(n, d))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RuleJson {
    pub letter: String,
    pub image: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionJson {
    pub alphabet: Vec<String>,
    pub rules: Vec<RuleJson>,
    pub primitive: bool,
    /// Least power with a positive matrix.
    pub primitivity_power: Option<u32>,
    pub proper: bool,
    pub periodicity: String,
}

impl SubstitutionJson {
    pub fn new(s: &Substitution) -> Self {
        let prim = s.is_primitive();
        SubstitutionJson {
            alphabet: s.alphabet().to_vec(),
            rules: (0..s.size() as u16)
                .map(|l| RuleJson {
                    letter: s.name(l).to_string(),
                    image: render_spaced(s, s.image(l)),
                })
                .collect(),
            primitive: prim.primitive,
            primitivity_power: prim.power,
            proper: s.is_proper(),
            periodicity: verdict_name(&s.periodicity_screen()).to_string(),
        }
    }
}

pub fn verdict_name(v: &PeriodicityVerdict) -> &'static str {
    match v {
        PeriodicityVerdict::AperiodicEvidence => "aperiodic-evidence",
        PeriodicityVerdict::Periodic => "periodic",
        PeriodicityVerdict::Inconclusive => "inconclusive",
    }
}

/// Letters separated by spaces, which parses back for any alphabet.
pub fn render_spaced(s: &Substitution, w: &[u16]) -> String {
    w.iter().map(|&l| s.name(l)).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerronJson {
    pub lambda: AlgebraicJson,
    pub q: PolyJson,
    pub charpoly: PolyJson,
    pub lengths: Vec<AlgebraicJson>,
    pub letter_frequencies: Vec<AlgebraicJson>,
    /// Enclosure of the second largest eigenvalue modulus.
    pub lambda2_modulus: IntervalJson,
    pub dim: u32,
    pub gamma: f64,
}

impl PerronJson {
    pub fn new(pd: &PerronData, dim: u32) -> Self {
        PerronJson {
            lambda: (&pd.lambda).into(),
            q: (&pd.q).into(),
            charpoly: (&pd.charpoly).into(),
            lengths: pd.lengths.iter().map(Into::into).collect(),
            letter_frequencies: pd.letter_freqs.iter().map(Into::into).collect(),
            lambda2_modulus: IntervalJson {
                lo: rat_string(&pd.lambda2_modulus.lo),
                hi: rat_string(&pd.lambda2_modulus.hi),
            },
            dim,
            gamma: pd.gamma(dim),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorJson {
    pub factor: PolyJson,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyJson {
    pub collar_radius: usize,
    pub cochain_dim: usize,
    pub k: usize,
    /// Irreducible factors of the characteristic polynomial of `A`.
    pub eigenvalues: Vec<FactorJson>,
    pub p: PolyJson,
    pub q: PolyJson,
    pub r: PolyJson,
    pub d: String,
    pub resultant: String,
    pub bezout_q: PolyJson,
    pub bezout_r: PolyJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub patch: String,
    pub controls: Vec<String>,
    pub coefficients: Vec<String>,
    /// Whether the sampled error was bounded and a function of the boundary collars.
    pub verified: bool,
    pub failure: Option<String>,
    pub collar_radius: Option<usize>,
    pub error_bound: Option<String>,
    pub potential_spread: Option<String>,
    pub windows: Option<usize>,
    pub distinct_collar_pairs: Option<usize>,
    pub rejected_radii: Vec<usize>,
    pub seed: u64,
}

impl CertificateJson {
    pub fn new(
        s: &Substitution,
        patch: &[u16],
        controls: &[tilecohom::language::Word],
        coefficients: &[BigRational],
        outcome: &tilecohom::Result<RegularityCertificate>,
        seed: u64,
    ) -> Self {
        let mut out = CertificateJson {
            patch: render_spaced(s, patch),
            controls: controls.iter().map(|w| render_spaced(s, w)).collect(),
            coefficients: coefficients.iter().map(rat_string).collect(),
            verified: false,
            failure: None,
            collar_radius: None,
            error_bound: None,
            potential_spread: None,
            windows: None,
            distinct_collar_pairs: None,
            rejected_radii: Vec::new(),
            seed,
        };
        match outcome {
            Ok(c) => {
                out.verified = c.boundary_map_checked;
                out.collar_radius = Some(c.collar_radius);
                out.error_bound = Some(rat_string(&c.error_bound));
                out.potential_spread = Some(rat_string(&c.potential_spread));
                out.windows = Some(c.windows);
                out.distinct_collar_pairs = Some(c.distinct_collar_pairs);
                out.rejected_radii = c.rejected_radii.clone();
            }
            Err(e) => out.failure = Some(e.to_string()),
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityJson {
    pub controls: Vec<String>,
    pub return_length: AlgebraicJson,
    pub certificates: Vec<CertificateJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub u_p: PolyJson,
    pub n: u32,
    pub l: AlgebraicJson,
    pub d: String,
    pub qprime_at_lambda: AlgebraicJson,
    pub q0: String,
}

impl From<&FrequencyForm> for FormJson {
    fn from(f: &FrequencyForm) -> Self {
        FormJson {
            u_p: (&f.u_p).into(),
            n: f.n,
            l: (&f.l).into(),
            d: f.d.to_string(),
            qprime_at_lambda: (&f.qprime_at_lambda).into(),
            q0: f.q0.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyJson {
    pub patch: String,
    pub value: AlgebraicJson,
    pub form: Option<FormJson>,
    pub form_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleJson {
    pub size: f64,
    pub sup_deviation: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceJson {
    pub patch: String,
    pub frequency: AlgebraicJson,
    pub theoretical_gamma: f64,
    pub fitted_exponent: Option<f64>,
    pub envelope_constant: f64,
    pub word_len: usize,
    pub seed: u64,
    pub rows: Vec<ScaleJson>,
}

impl ConvergenceJson {
    pub fn new(s: &Substitution, f: &AlgebraicNumber, r: &ConvergenceReport) -> Self {
        ConvergenceJson {
            patch: render_spaced(s, &r.patch),
            frequency: f.into(),
            theoretical_gamma: r.theoretical_gamma,
            fitted_exponent: r.fitted_exponent,
            envelope_constant: r.envelope_constant,
            word_len: r.word_len,
            seed: r.seed,
            rows: r
                .rows
                .iter()
                .map(|x| ScaleJson {
                    size: x.size,
                    sup_deviation: x.sup_deviation,
                    samples: x.samples,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub kind: String,
    pub seed: u64,
    pub substitution: SubstitutionJson,
    pub perron: PerronJson,
    pub cohomology: CohomologyJson,
    pub regularity: RegularityJson,
    pub frequencies: Vec<FrequencyJson>,
    pub convergence: Option<ConvergenceJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub kind: String,
    pub substitution: SubstitutionJson,
    pub collar_radius: usize,
    pub certificate: CertificateJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceCommandReport {
    pub kind: String,
    pub substitution: SubstitutionJson,
    pub convergence: ConvergenceJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub q: PolyJson,
    pub r: PolyJson,
    pub resultant: String,
    pub reduced_resultant: Option<String>,
    pub bezout_q: Option<PolyJson>,
    pub bezout_r: Option<PolyJson>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub kind: String,
    pub matrix: Vec<Vec<String>>,
    pub primitive: bool,
    pub primitivity_power: Option<u32>,
    pub charpoly: PolyJson,
    pub charpoly_factors: Vec<FactorJson>,
    /// Absent when the matrix is not primitive.
    pub perron: Option<PerronJson>,
    /// Characteristic polynomial divided by the Perron factor.
    pub remaining_factor: Option<PolyJson>,
    pub pairs: Vec<PairJson>,
}
