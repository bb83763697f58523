//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero on any failure that is not a documented divergence.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{alg, brute_iterate, brute_prefix, fixture, rat, scan, word, MAIN_FIXTURES};
use tilecohom::cohomology::{bezout_defect, cohomology_rank, patch_class, poly_at, presentation};
use tilecohom::exactalg::{
    charpoly, companion_matrix, factor_squarefree_then_irreducible, prime_support,
    reduced_resultant, resultant, IntPoly,
};
use tilecohom::frequency::{
    convergence_experiment, decompose_frequency, zspan_check, ConvergenceConfig, FrequencyTable,
    FrequencyValue, MIN_SCALES,
};
use tilecohom::language::{
    anchored_count_vector, collar, count_anchored, factors_up_to, iterate, min_order, Word,
};
use tilecohom::regularity::{
    default_return_length, find_control_patches, solve_coefficients, verify_certificate,
    with_controls, SampleConfig,
};
use tilecohom::substitution::Substitution;

/// Criteria whose stated expectations disagree with direct computation.
/// Each must still FAIL; a listed criterion that passes is itself an error.
const KNOWN_DIVERGENCES: &[(u32, &str)] = &[(
    1,
    "the stated aababb coefficients and one supertile-table row contradict direct counting",
)];

#[derive(Default)]
struct Checks {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }

    fn guard<T>(&mut self, r: tilecohom::Result<T>, what: &str) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{what}: {e}"));
                None
            }
        }
    }

    fn within(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.note(format!("runtime {:.2?}", took));
        self.expect(
            took < limit,
            format!("runtime {took:.2?} exceeds {limit:?}"),
        );
    }
}

fn poly(c: &[i64]) -> IntPoly {
    IntPoly::from_i64s(c)
}

fn legal_patches(s: &Substitution, max_len: usize) -> Vec<Word> {
    factors_up_to(s, max_len)
        .into_iter()
        .skip(1)
        .flatten()
        .collect()
}

/// Integer roots of the linear factors of `p`, or `None` if a factor is nonlinear.
fn integer_roots(p: &IntPoly) -> Option<BTreeSet<BigInt>> {
    let fs = factor_squarefree_then_irreducible(p).ok()?;
    fs.iter()
        .map(|(f, _)| {
            if f.deg() != 1 {
                return None;
            }
            let (c0, c1) = (f.coeff(0), f.coeff(1));
            c0.is_multiple_of(&c1).then(|| -(c0 / c1))
        })
        .collect()
}

/// True iff `x` lies in (1/3)Z[1/2].
fn in_third_dyadic(x: &BigRational) -> bool {
    let mut d = (x * BigRational::from_integer(BigInt::from(3)))
        .denom()
        .clone();
    while d.is_even() {
        d /= 2;
    }
    d.is_one()
}

fn criterion_1(c: &mut Checks) {
    let start = Instant::now();
    let s = fixture("thue_morse");
    let Some(pres) = c.guard(presentation(&s, 6), "presentation") else {
        return;
    };
    c.expect(pres.k == 2, format!("k = {}", pres.k));
    let eig = integer_roots(&pres.p);
    let want: BTreeSet<BigInt> = [BigInt::from(2), BigInt::from(-1)].into();
    c.expect(
        eig.as_ref() == Some(&want),
        format!("eigenvalues of A from p = {}", pres.p),
    );
    c.expect(pres.q == poly(&[-2, 1]), format!("q = {}", pres.q));
    c.expect(pres.r == poly(&[1, 1]), format!("r = {}", pres.r));
    c.expect(*pres.d() == BigInt::from(3), format!("D = {}", pres.d()));

    if let Some(t) = c.guard(FrequencyTable::new(&s, 2), "frequency table") {
        for (p, v) in [("ab", rat(1, 3)), ("aa", rat(1, 6))] {
            let f = t
                .frequency(&word(&s, p))
                .ok()
                .and_then(|f| f.0.to_rational());
            c.expect(f.as_ref() == Some(&v), format!("f({p}) = {f:?}, want {v}"));
        }
    }

    let (ab, aa, p3) = (word(&s, "ab"), word(&s, "aa"), word(&s, "aababb"));
    if let Some(ctl) = c.guard(with_controls(&pres, &[ab.clone(), aa.clone()]), "controls") {
        if let Some(coef) = c.guard(solve_coefficients(&p3, &ctl, &pres), "coefficients") {
            let stated = vec![rat(-1, 8), rat(7, 8)];
            let shown: Vec<String> = coef.iter().map(|x| x.to_string()).collect();
            c.note(format!(
                "aababb coefficients on (ab, aa) = ({})",
                shown.join(", ")
            ));
            c.expect(
                coef == stated,
                format!(
                    "aababb coefficients ({}) differ from (-1/8, 7/8)",
                    shown.join(", ")
                ),
            );
        }
    }

    // (patch, supertile letter, following letter, printed value)
    let table = [
        ("ab", 'a', 'a', 3),
        ("ab", 'a', 'b', 3),
        ("ab", 'b', 'a', 2),
        ("ab", 'b', 'b', 3),
        ("aa", 'a', 'a', 1),
        ("aa", 'a', 'b', 1),
        ("aa", 'b', 'a', 2),
        ("aa", 'b', 'b', 1),
        ("aababb", 'a', 'a', 0),
        ("aababb", 'a', 'b', 1),
        ("aababb", 'b', 'a', 1),
        ("aababb", 'b', 'b', 1),
    ];
    for (p, x, y, printed) in table {
        let sup = |l: char| iterate(&s, s.letter_index(&l.to_string()).unwrap(), 3).unwrap();
        let got = count_anchored(&word(&s, p), &sup(x), &sup(y)).unwrap();
        c.expect(
            got == printed,
            format!("table entry chi({p}) on phi^3({x}) followed by phi^3({y}): counted {got}, printed {printed}"),
        );
    }
    c.within(start, Duration::from_secs(10));
}

fn criterion_2(c: &mut Checks) {
    let start = Instant::now();
    let s = fixture("thue_morse_4");
    let Some(pres) = c.guard(presentation(&s, 1), "presentation") else {
        return;
    };
    let want: BTreeSet<BigInt> = [BigInt::from(16), BigInt::one()].into();
    c.expect(
        integer_roots(&pres.p).as_ref() == Some(&want),
        format!("eigenvalues from p = {}", pres.p),
    );
    c.expect(*pres.d() == BigInt::from(15), format!("D = {}", pres.d()));
    let Some(t) = c.guard(FrequencyTable::new(&s, 6), "frequency table") else {
        return;
    };
    let patches = legal_patches(&s, 6);
    for p in &patches {
        match t.frequency(p).ok().and_then(|f| f.0.to_rational()) {
            Some(f) => c.expect(
                in_third_dyadic(&f),
                format!("f({}) = {f} outside (1/3)Z[1/2]", s.render(p)),
            ),
            None => c.expect(false, format!("f({}) not rational", s.render(p))),
        }
    }
    c.note(format!("{} patches inspected", patches.len()));
    c.within(start, Duration::from_secs(30));
}

fn criterion_3(c: &mut Checks) {
    let s = fixture("a8b8");
    let k = cohomology_rank(&s);
    c.expect(k == Ok(2), format!("k = {k:?}"));
    let Some(t) = c.guard(FrequencyTable::new(&s, 4), "frequency table") else {
        return;
    };
    for (p, v) in [("a", rat(7, 15)), ("b", rat(8, 15))] {
        let f = t
            .frequency(&word(&s, p))
            .ok()
            .and_then(|f| f.0.to_rational());
        c.expect(f.as_ref() == Some(&v), format!("f({p}) = {f:?}, want {v}"));
    }
    let outside: Vec<String> = legal_patches(&s, 4)
        .iter()
        .filter(|p| {
            t.frequency(p)
                .ok()
                .and_then(|f| f.0.to_rational())
                .is_some_and(|f| !in_third_dyadic(&f))
        })
        .map(|p| s.render(p))
        .collect();
    c.note(format!("{} patches outside (1/3)Z[1/2]", outside.len()));
    c.expect(
        !outside.is_empty(),
        "every patch frequency lies in (1/3)Z[1/2]",
    );
}

fn criterion_4(c: &mut Checks) {
    let s = fixture("fib_variant");
    let k = cohomology_rank(&s);
    c.expect(k == Ok(3), format!("k = {k:?}"));
    let Some(pd) = c.guard(s.perron_data(), "Perron data") else {
        return;
    };
    c.expect(pd.q == poly(&[-1, -4, 1]), format!("q = {}", pd.q));
    let f = &pd.field;
    // the field is generated by lambda = 2 + sqrt5
    let lam = f.generator();
    c.expect(
        pd.lambda == lam && (pd.lambda_f64() - (2.0 + 5f64.sqrt())).abs() < 1e-12,
        "lambda",
    );
    let sqrt5 = alg(f, &[(-2, 1), (1, 1)]);
    let one = alg(f, &[(1, 1)]);
    c.expect(
        pd.lengths == vec![&sqrt5 + &one, alg(f, &[(2, 1)])],
        format!("lengths ({}, {})", pd.lengths[0], pd.lengths[1]),
    );
    let inv = |x: &tilecohom::exactalg::AlgebraicNumber| x.inv().unwrap();
    let fa = inv(&sqrt5.scale(&rat(2, 1)));
    let fab = inv(&sqrt5.scale(&rat(4, 1)));
    let fb = &(&sqrt5 - &one) * &fab;
    let Some(t) = c.guard(FrequencyTable::new(&s, 8), "frequency table") else {
        return;
    };
    for (p, v) in [("a", &fa), ("b", &fb), ("ab", &fab)] {
        let got = t.frequency(&word(&s, p)).map(|x| x.0);
        c.expect(got.as_ref() == Ok(v), format!("f({p}) = {got:?}"));
    }
    let basis = [FrequencyValue(fa), FrequencyValue(fb), FrequencyValue(fab)];
    let patches = legal_patches(&s, 8);
    let targets: Vec<FrequencyValue> = patches.iter().filter_map(|p| t.frequency(p).ok()).collect();
    c.expect(targets.len() == patches.len(), "some frequencies failed");
    if let Some(ok) = c.guard(zspan_check(&targets, &basis), "zspan") {
        for (p, ok) in patches.iter().zip(ok) {
            c.expect(ok, format!("f({}) not an integer combination", s.render(p)));
        }
    }
    c.note(format!("{} patches in the integer span", patches.len()));
}

fn criterion_5(c: &mut Checks) {
    let mut worst = 0;
    let mut count = 0;
    for name in MAIN_FIXTURES.iter().chain(&["proper"]) {
        let s = fixture(name);
        let Some(pd) = c.guard(s.perron_data(), name) else {
            continue;
        };
        let Some(pres) = c.guard(presentation(&s, 1), name) else {
            continue;
        };
        let Some(l) = c.guard(default_return_length(&s, &pd), name) else {
            continue;
        };
        let Some(t) = c.guard(FrequencyTable::new(&s, 6), name) else {
            continue;
        };
        for p in legal_patches(&s, 6) {
            let Some(f) = c.guard(t.frequency(&p), name) else {
                continue;
            };
            match decompose_frequency(&f, &l, pres.d(), &pd.q, 8) {
                Ok(form) => {
                    worst = worst.max(form.n);
                    count += 1;
                    c.expect(
                        form.reconstruct().as_ref() == Ok(&f.0),
                        format!("{name} {}: reconstruction differs", s.render(&p)),
                    );
                }
                Err(e) => c.expect(false, format!("{name} {}: {e}", s.render(&p))),
            }
        }
    }
    c.note(format!("{count} patches decomposed, largest n = {worst}"));
}

fn criterion_6(c: &mut Checks) {
    for name in MAIN_FIXTURES {
        let s = fixture(name);
        let Some(pres) = c.guard(presentation(&s, 5), name) else {
            continue;
        };
        let Some(ctl) = c.guard(find_control_patches(&pres, 5), name) else {
            continue;
        };
        let (mut spread, mut rho, mut n) = (BigRational::zero(), 0, 0);
        for p in legal_patches(&s, 5) {
            let label = format!("{name} {}", s.render(&p));
            let Some(coef) = c.guard(solve_coefficients(&p, &ctl, &pres), &label) else {
                continue;
            };
            let Some(cert) = c.guard(
                verify_certificate(&p, &ctl.patches, &coef, &s, &SampleConfig::default()),
                &label,
            ) else {
                continue;
            };
            c.expect(
                cert.windows == 10_000,
                format!("{label}: {} windows", cert.windows),
            );
            c.expect(
                cert.boundary_map_checked,
                format!("{label}: collar map unchecked"),
            );
            c.expect(
                cert.error_bound <= cert.potential_spread,
                format!("{label}: |e| above the potential bound"),
            );
            spread = spread.max(cert.potential_spread);
            rho = rho.max(cert.collar_radius);
            n += 1;
        }
        c.note(format!(
            "{name}: {n} patches, max bound {spread}, max rho {rho}"
        ));
    }
}

fn criterion_7(c: &mut Checks) {
    let start = Instant::now();
    for (name, p) in [("thue_morse", "ab"), ("nonpisot", "a")] {
        let s = fixture(name);
        let Some(t) = c.guard(FrequencyTable::new(&s, 2), name) else {
            continue;
        };
        let Some(f) = c.guard(t.frequency(&word(&s, p)), name) else {
            continue;
        };
        let cfg = ConvergenceConfig::default();
        let Some(rep) = c.guard(convergence_experiment(&word(&s, p), &s, &f, &cfg), name) else {
            continue;
        };
        let top = rep.rows.iter().map(|r| r.size).fold(0.0, f64::max);
        c.expect(
            rep.rows.len() >= MIN_SCALES,
            format!("{name}: {} scales", rep.rows.len()),
        );
        c.expect(top >= 1e6, format!("{name}: largest scale {top}"));
        c.expect(
            rep.envelope_constant.is_finite(),
            format!("{name}: K = {}", rep.envelope_constant),
        );
        let fit = rep.fitted_exponent.unwrap_or(f64::NAN);
        c.expect(
            fit >= rep.theoretical_gamma - 0.15,
            format!(
                "{name}: fitted {fit:.3} < gamma {:.3} - 0.15",
                rep.theoretical_gamma
            ),
        );
        c.note(format!(
            "{name}/{p}: gamma {:.3}, fitted {fit:.3}, K {:.3}",
            rep.theoretical_gamma, rep.envelope_constant
        ));
    }
    c.within(start, Duration::from_secs(300));
}

fn criterion_8(c: &mut Checks) {
    for name in MAIN_FIXTURES.iter().chain(&["proper"]) {
        let s = fixture(name);
        let Some(pres) = c.guard(presentation(&s, 3), name) else {
            continue;
        };
        c.expect(
            bezout_defect(&pres).is_zero_matrix(),
            format!("{name}: D.I != Q(A)q(A) + R(A)r(A)"),
        );
        for f in [&pres.q, &pres.r, &pres.p]
            .into_iter()
            .filter(|f| f.deg() > 0)
        {
            let ok = companion_matrix(f).and_then(|m| charpoly(&m)).as_ref() == Ok(f);
            c.expect(ok, format!("{name}: charpoly(companion({f})) != {f}"));
        }
        let Some(t) = c.guard(FrequencyTable::new(&s, 3), name) else {
            continue;
        };
        let qq = poly_at(&(&pres.witness.q_coeff * &pres.q), &pres.a);
        let patches = legal_patches(&s, 3);
        for p in &patches {
            let label = format!("{name} {}", s.render(p));
            let Some(y) = c.guard(patch_class(p, &pres), &label) else {
                continue;
            };
            let z = qq.mul_vec(&y.coords);
            let tr = t.trace_class(&pres, &z);
            c.expect(
                tr.as_ref().is_ok_and(|x| x.is_zero()),
                format!("{label}: trace of Q(A)q(A) class = {tr:?}"),
            );
            let linked = t.trace_class(&pres, &y.coords).ok() == t.frequency(p).ok().map(|f| f.0);
            c.expect(linked, format!("{label}: trace of class differs from f(P)"));
        }
        c.note(format!("{name}: {} sampled patches", patches.len()));
    }
}

/// Anchored counts by materializing supertiles and scanning.
fn anchored_oracle(c: &mut Checks, name: &str, s: &Substitution) {
    let radius = 3;
    let Some(bs) = c.guard(collar(s, radius), name) else {
        return;
    };
    for p in legal_patches(s, radius) {
        let n0 = min_order(s, p.len());
        for n in n0..=6 {
            let Some(v) = c.guard(anchored_count_vector(s, &p, &bs, n), name) else {
                continue;
            };
            // counts entirely inside phi^n(letter) are shared across collars
            let interior: Vec<(Vec<_>, u64)> = (0..s.size())
                .map(|l| {
                    let img = brute_iterate(s, &[l as u16], n);
                    let k = scan(&p, &img, img.len());
                    (img, k)
                })
                .collect();
            for ci in 0..bs.len() {
                let cl = bs.collared(ci);
                let (img, inside) = &interior[cl.center as usize];
                let tail_len = p.len().saturating_sub(1).min(img.len());
                let mut straddle = img[img.len() - tail_len..].to_vec();
                straddle.extend(brute_prefix(s, &cl.right, n, p.len()));
                let across = scan(&p, &straddle, tail_len);
                let want = BigInt::from(inside + across);
                if v.values[ci] != want {
                    c.expect(
                        false,
                        format!(
                            "{name} {} n={n} collar {ci}: {} vs {want}",
                            s.render(&p),
                            v.values[ci]
                        ),
                    );
                }
            }
        }
    }
}

fn random_monic(rng: &mut ChaCha8Rng, deg: usize) -> IntPoly {
    let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-3..=3)).collect();
    c.push(1);
    IntPoly::from_i64s(&c)
}

/// `a mod b` for monic `b` with small integer coefficients.
fn rem_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    while a.len() > db {
        let lead = a.pop().unwrap();
        let off = a.len() - db;
        for i in 0..db {
            a[off + i] -= lead * b[i];
        }
    }
    a
}

fn mul_small(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exhaustive search for the smallest positive constant `R r mod q` with
/// integer `R`, `deg R < deg q`, `q` monic. The first `deg q - 1`
/// coefficients of `R` range over a box that provably contains the minimal
/// witness (a cofactor bound on the multiplication-by-`r` matrix); the last
/// coefficient is then forced by the vanishing of the nonconstant terms.
/// Returns the minimum and every constant seen.
fn bezout_search(q: &[i64], r: &[i64]) -> (i64, i64, Vec<i64>) {
    let d = q.len() - 1;
    let cols: Vec<Vec<i64>> = (0..d)
        .map(|j| {
            let mut xj = vec![0; j];
            xj.push(1);
            rem_monic(&mul_small(&xj, r), q)
        })
        .collect();
    let norms: Vec<f64> = cols
        .iter()
        .map(|c| (c.iter().map(|x| (x * x) as f64).sum::<f64>()).sqrt())
        .collect();
    let bound = (0..d)
        .map(|skip| {
            norms
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, n)| n)
                .product::<f64>()
        })
        .fold(1.0, f64::max)
        .ceil() as i64;
    let mut found = Vec::new();
    let mut record = |coeffs: &[i64]| {
        let val: Vec<i64> = (0..d)
            .map(|i| (0..d).map(|j| coeffs[j] * cols[j][i]).sum())
            .collect();
        if val[1..].iter().all(|&x| x == 0) && val[0] != 0 {
            found.push(val[0].abs());
        }
    };
    let mut free = vec![-bound; d - 1];
    loop {
        let partial: Vec<i64> = (0..d)
            .map(|i| (0..d - 1).map(|j| free[j] * cols[j][i]).sum())
            .collect();
        let last = &cols[d - 1];
        match (1..d).find(|&i| last[i] != 0) {
            Some(i) if partial[i] % last[i] == 0 => {
                let mut c = free.clone();
                c.push(-partial[i] / last[i]);
                record(&c);
            }
            Some(_) => {}
            None => {
                for t in -bound..=bound {
                    let mut c = free.clone();
                    c.push(t);
                    record(&c);
                }
            }
        }
        let mut i = 0;
        while i < d - 1 && free[i] == bound {
            free[i] = -bound;
            i += 1;
        }
        if i == d - 1 {
            break;
        }
        free[i] += 1;
    }
    let min = found.iter().copied().min().unwrap_or(0);
    (min, bound, found)
}

fn criterion_9(c: &mut Checks) {
    let names = [
        "thue_morse",
        "thue_morse_4",
        "a8b8",
        "fib_variant",
        "nonpisot",
        "proper",
        "periodic",
    ];
    for name in names {
        anchored_oracle(c, name, &fixture(name));
    }
    c.note(format!("anchored counts match on {} fixtures", names.len()));

    let mut rng = ChaCha8Rng::seed_from_u64(0xBE20_0007);
    let mut pairs = 0;
    let mut largest = 0;
    while pairs < 50 {
        let (dq, dr) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (q, r) = (random_monic(&mut rng, dq), random_monic(&mut rng, dr));
        if q.to_rat().gcd(&r.to_rat()).deg() > 0 {
            continue;
        }
        pairs += 1;
        let Some(w) = c.guard(reduced_resultant(&q, &r), "reduced resultant") else {
            continue;
        };
        let res = resultant(&q, &r).unwrap();
        c.expect(w.verify(&q, &r), format!("witness fails for ({q}, {r})"));
        c.expect(
            res.is_multiple_of(&w.d),
            format!("D = {} does not divide Res = {res}", w.d),
        );
        c.expect(
            prime_support(&w.d).ok() == prime_support(&res.abs()).ok(),
            format!("prime support of D = {} and Res = {res} differ", w.d),
        );
        let small = |p: &IntPoly| {
            p.coeffs()
                .iter()
                .map(|x| x.to_i64().unwrap())
                .collect::<Vec<_>>()
        };
        // D is symmetric in the pair; search modulo the lower-degree one
        let (m, o) = if q.deg() <= r.deg() {
            (&q, &r)
        } else {
            (&r, &q)
        };
        let (d, bound, all) = bezout_search(&small(m), &small(o));
        largest = largest.max(bound);
        c.expect(
            BigInt::from(d) == w.d,
            format!("({q}, {r}): search D = {d}, library D = {}", w.d),
        );
        c.expect(
            d > 0 && all.iter().all(|x| x % d == 0),
            format!("({q}, {r}): constants not multiples of {d}"),
        );
    }
    c.note(format!(
        "{pairs} coprime pairs, search box radius up to {largest}"
    ));
}

type Criterion = (u32, fn(&mut Checks));

fn main() {
    let criteria: [Criterion; 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut unexpected = Vec::new();
    for (id, run) in criteria {
        let mut checks = Checks::default();
        run(&mut checks);
        let pass = checks.failures.is_empty();
        println!("criterion {id}: {}", if pass { "PASS" } else { "FAIL" });
        for n in &checks.notes {
            println!("    {n}");
        }
        for f in checks.failures.iter().take(12) {
            println!("    failed: {f}");
        }
        if checks.failures.len() > 12 {
            println!("    ... {} more failures", checks.failures.len() - 12);
        }
        match KNOWN_DIVERGENCES.iter().find(|(k, _)| *k == id) {
            Some((_, why)) if !pass => println!("    known divergence: {why}"),
            Some(_) => unexpected.push(format!("criterion {id} passes but is listed as divergent")),
            None if !pass => unexpected.push(format!("criterion {id} failed")),
            None => {}
        }
    }
    if !unexpected.is_empty() {
        eprintln!("{}", unexpected.join("\n"));
        std::process::exit(1);
    }
}
