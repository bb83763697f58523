//! The four subcommands, each producing a serializable report.

use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;

use tilecohom::cohomology::{presentation, CohomologyPresentation};
use tilecohom::exactalg::{
    charpoly, charpoly_rat_matrix, factor_squarefree_then_irreducible, reduced_resultant,
    resultant, AlgebraicNumber, IntMatrix, IntPoly,
};
use tilecohom::frequency::{
    convergence_experiment, decompose_frequency, ConvergenceConfig, FrequencyTable, DEFAULT_N_MAX,
    DEFAULT_SEED,
};
use tilecohom::language::{factors_up_to, is_legal, Word};
use tilecohom::regularity::{
    default_return_length, find_control_patches, solve_coefficients, verify_certificate,
    with_controls, ControlPatchSet, SampleConfig,
};
use tilecohom::substitution::{
    is_primitive_matrix, parse_length_poly, parse_substitution, perron_data_for_matrix,
    Substitution,
};
use tilecohom::Error;

use crate::report::*;

/// A failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. }
            | Error::TooFewScales { .. }
            | Error::InvalidLengths(_)
            | Error::Singular(_)
            | Error::EmptyPatch => 2,
            Error::NonPrimitive => 3,
            Error::IllegalPatch(_) => 5,
            _ => 4,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Options shared by the substitution-level commands.
#[derive(Clone, Debug)]
pub struct Common {
    pub seed: u64,
    pub collar_radius: Option<usize>,
    pub samples: usize,
}

impl Default for Common {
    fn default() -> Self {
        Common {
            seed: DEFAULT_SEED,
            collar_radius: None,
            samples: SampleConfig::default().samples,
        }
    }
}

pub fn load(path: &Path) -> CliResult<Substitution> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let s = parse_substitution(&text).map_err(|e| CliError {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    if !s.is_primitive().primitive {
        return Err(Error::NonPrimitive.into());
    }
    Ok(s)
}

/// Parses a patch and checks that it is a legal factor.
pub fn legal_word(s: &Substitution, text: &str) -> CliResult<Word> {
    let w = s
        .word(text)
        .map_err(|e| CliError::usage(format!("patch {text:?}: {e}")))?;
    if w.is_empty() {
        return Err(Error::EmptyPatch.into());
    }
    if !is_legal(s, &w) {
        return Err(Error::IllegalPatch(s.render(&w)).into());
    }
    Ok(w)
}

fn sample_config(c: &Common) -> SampleConfig {
    SampleConfig {
        samples: c.samples,
        seed: c.seed,
        ..Default::default()
    }
}

fn factors_json(p: &IntPoly) -> CliResult<Vec<FactorJson>> {
    Ok(factor_squarefree_then_irreducible(p)?
        .iter()
        .map(|(f, m)| FactorJson {
            factor: f.into(),
            multiplicity: *m,
        })
        .collect())
}

fn cohomology_json(pres: &CohomologyPresentation) -> CliResult<CohomologyJson> {
    Ok(CohomologyJson {
        collar_radius: pres.block_system.radius(),
        cochain_dim: pres.dim(),
        k: pres.k,
        eigenvalues: factors_json(&charpoly_rat_matrix(&pres.a)?)?,
        p: (&pres.p).into(),
        q: (&pres.q).into(),
        r: (&pres.r).into(),
        d: pres.d().to_string(),
        resultant: pres.resultant()?.to_string(),
        bezout_q: (&pres.witness.q_coeff).into(),
        bezout_r: (&pres.witness.r_coeff).into(),
    })
}

pub struct AnalyzeOptions {
    pub common: Common,
    pub max_patch_len: usize,
    pub return_length: Option<String>,
    pub dim: u32,
    /// Window sizes for an optional convergence block on the first control.
    pub scales: Option<Vec<f64>>,
}

pub fn analyze(path: &Path, o: &AnalyzeOptions) -> CliResult<AnalysisReport> {
    let s = load(path)?;
    if o.max_patch_len == 0 {
        return Err(CliError::usage("--max-patch-len must be positive"));
    }
    let pd = s.perron_data()?;
    let radius = o
        .common
        .collar_radius
        .unwrap_or(o.max_patch_len)
        .max(o.max_patch_len);
    let pres = presentation(&s, radius)?;
    let controls = find_control_patches(&pres, o.max_patch_len)?;
    let table = FrequencyTable::new(&s, radius)?;
    let l = match &o.return_length {
        Some(text) => {
            let poly = parse_length_poly(text)
                .map_err(|m| CliError::usage(format!("--return-length: {m}")))?;
            let l = AlgebraicNumber::from_int_poly(&pd.field, &poly);
            if !l.is_positive() {
                return Err(CliError::usage("--return-length must be positive"));
            }
            l
        }
        None => default_return_length(&s, &pd)?,
    };
    let patches: Vec<Word> = factors_up_to(&s, o.max_patch_len)
        .into_iter()
        .skip(1)
        .flatten()
        .collect();
    let mut frequencies = Vec::with_capacity(patches.len());
    let mut certificates = Vec::with_capacity(patches.len());
    let cfg = sample_config(&o.common);
    for p in &patches {
        let f = table.frequency(p)?;
        let form = decompose_frequency(&f, &l, pres.d(), &pd.q, DEFAULT_N_MAX);
        frequencies.push(FrequencyJson {
            patch: render_spaced(&s, p),
            value: f.value().into(),
            form: form.as_ref().ok().map(Into::into),
            form_error: form.err().map(|e| e.to_string()),
        });
        let c = solve_coefficients(p, &controls, &pres)?;
        let outcome = verify_certificate(p, &controls.patches, &c, &s, &cfg);
        certificates.push(CertificateJson::new(
            &s,
            p,
            &controls.patches,
            &c,
            &outcome,
            o.common.seed,
        ));
    }
    let convergence = match &o.scales {
        Some(sizes) => {
            let p = &controls.patches[0];
            let f = table.frequency(p)?;
            let cfg = ConvergenceConfig {
                sizes: sizes.clone(),
                seed: o.common.seed,
                dim: o.dim,
                ..Default::default()
            };
            let rep = convergence_experiment(p, &s, &f, &cfg)?;
            Some(ConvergenceJson::new(&s, f.value(), &rep))
        }
        None => None,
    };
    Ok(AnalysisReport {
        kind: "analysis".into(),
        seed: o.common.seed,
        substitution: SubstitutionJson::new(&s),
        perron: PerronJson::new(&pd, o.dim),
        cohomology: cohomology_json(&pres)?,
        regularity: RegularityJson {
            controls: controls
                .patches
                .iter()
                .map(|w| render_spaced(&s, w))
                .collect(),
            return_length: (&l).into(),
            certificates,
        },
        frequencies,
        convergence,
    })
}

pub fn regularity(
    path: &Path,
    patch: &str,
    controls: &[String],
    common: &Common,
) -> CliResult<RegularityReport> {
    let s = load(path)?;
    let p = legal_word(&s, patch)?;
    let given: Vec<Word> = controls
        .iter()
        .map(|c| legal_word(&s, c))
        .collect::<CliResult<_>>()?;
    let longest = given
        .iter()
        .map(|w| w.len())
        .chain([p.len()])
        .max()
        .unwrap_or(1);
    let radius = common.collar_radius.unwrap_or(longest).max(longest);
    let pres = presentation(&s, radius)?;
    let set: ControlPatchSet = if given.is_empty() {
        find_control_patches(&pres, radius)?
    } else {
        with_controls(&pres, &given)?
    };
    let c = solve_coefficients(&p, &set, &pres)?;
    let outcome = verify_certificate(&p, &set.patches, &c, &s, &sample_config(common));
    Ok(RegularityReport {
        kind: "regularity".into(),
        substitution: SubstitutionJson::new(&s),
        collar_radius: radius,
        certificate: CertificateJson::new(&s, &p, &set.patches, &c, &outcome, common.seed),
    })
}

pub fn convergence(
    path: &Path,
    patch: &str,
    scales: Option<Vec<f64>>,
    dim: u32,
    common: &Common,
) -> CliResult<ConvergenceCommandReport> {
    let s = load(path)?;
    let p = legal_word(&s, patch)?;
    let defaults = ConvergenceConfig::default();
    let cfg = ConvergenceConfig {
        sizes: scales.unwrap_or(defaults.sizes),
        seed: common.seed,
        dim,
        ..defaults
    };
    let f = FrequencyTable::new(&s, p.len())?.frequency(&p)?;
    let rep = convergence_experiment(&p, &s, &f, &cfg)?;
    Ok(ConvergenceCommandReport {
        kind: "convergence".into(),
        substitution: SubstitutionJson::new(&s),
        convergence: ConvergenceJson::new(&s, f.value(), &rep),
    })
}

/// Matrix-mode input file.
#[derive(Debug, Deserialize)]
pub struct MatrixInput {
    pub matrix: Vec<Vec<i64>>,
    #[serde(default)]
    pub dim: Option<u32>,
    /// Polynomial pairs as coefficient lists from the constant term up.
    #[serde(default)]
    pub pairs: Vec<PolyPair>,
}

#[derive(Debug, Deserialize)]
pub struct PolyPair {
    pub q: Vec<i64>,
    pub r: Vec<i64>,
}

pub fn matrix(path: &Path, dim_flag: Option<u32>) -> CliResult<MatrixReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    let input: MatrixInput = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    matrix_report(&input, dim_flag)
}

pub fn matrix_report(input: &MatrixInput, dim_flag: Option<u32>) -> CliResult<MatrixReport> {
    let n = input.matrix.len();
    if n == 0 || input.matrix.iter().any(|r| r.len() != n) {
        return Err(CliError::usage("matrix must be square and nonempty"));
    }
    if input.matrix.iter().flatten().any(|&x| x < 0) {
        return Err(CliError::usage("matrix entries must be nonnegative"));
    }
    let m = IntMatrix::from_i64_rows(&input.matrix)?;
    let dim = dim_flag.or(input.dim).unwrap_or(1);
    if dim == 0 {
        return Err(CliError::usage("dim must be positive"));
    }
    let chi = charpoly(&m)?;
    let prim = is_primitive_matrix(&m);
    let (perron, remaining_factor) = if prim.primitive {
        let pd = perron_data_for_matrix(&m, None)?;
        let rest = chi.div_exact(&pd.q).ok_or_else(|| {
            Error::Internal("Perron factor does not divide the characteristic polynomial".into())
        })?;
        (Some(PerronJson::new(&pd, dim)), Some((&rest).into()))
    } else {
        (None, None)
    };
    let pairs = input
        .pairs
        .iter()
        .map(|pr| {
            let (q, r) = (IntPoly::from_i64s(&pr.q), IntPoly::from_i64s(&pr.r));
            let res = resultant(&q, &r)?;
            let w = reduced_resultant(&q, &r);
            Ok(PairJson {
                q: (&q).into(),
                r: (&r).into(),
                resultant: res.to_string(),
                reduced_resultant: w.as_ref().ok().map(|w| w.d.to_string()),
                bezout_q: w.as_ref().ok().map(|w| (&w.q_coeff).into()),
                bezout_r: w.as_ref().ok().map(|w| (&w.r_coeff).into()),
                error: w.err().map(|e| e.to_string()),
            })
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(MatrixReport {
        kind: "matrix".into(),
        matrix: input
            .matrix
            .iter()
            .map(|r| r.iter().map(|x| BigInt::from(*x).to_string()).collect())
            .collect(),
        primitive: prim.primitive,
        primitivity_power: prim.power,
        charpoly: (&chi).into(),
        charpoly_factors: factors_json(&chi)?,
        perron,
        remaining_factor,
        pairs,
    })
}
