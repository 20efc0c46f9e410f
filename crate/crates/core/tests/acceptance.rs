//! Acceptance criteria, one line each. Run with `cargo test --test acceptance`.
//!
//! Every check compares library output against an oracle computed here from
//! first principles; the library's own suites are run alongside.

use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode};
use std::time::Instant;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use stemcalc::cauchy::{cauchy_transform, contour_for, ContourPolicy, QuadratureOptions};
use stemcalc::clifford::{basis_mul, BasisIndex, CMultivector, Multivector, Paravector};
use stemcalc::dsl;
use stemcalc::job::{error_report, render, run_job, JobSpec};
use stemcalc::operator::{cl_spectrum_membership, riesz_dunford_matrix, slice_calculus_matrix, CliffordOperator};
use stemcalc::sampling::{self, ExprOptions};
use stemcalc::spectral::{eigenvalues, resolvent};
use stemcalc::stem::{gfc_eval, slice_lift, slice_restriction, StemFunction};
use stemcalc::suites::{run_suite, Bound, SuiteOptions};
use stemcalc::{Error, Result};

type C = Complex<f64>;
type CMat = DMatrix<C>;

const JOB_ENV: &str = "STEMCALC_ACCEPTANCE_JOB";

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

// ---------------------------------------------------------------------------
// Oracles

/// Sign and mask of `e_a e_b`, by sorting the generator word and cancelling squares.
fn oracle_blade(a: u32, b: u32) -> (f64, u32) {
    let gens = |m: u32| (0..32).filter(move |j| m >> j & 1 == 1);
    let mut word: Vec<u32> = gens(a).chain(gens(b)).collect();
    let mut sign = 1.0;
    while let Some(i) = (0..word.len().saturating_sub(1)).find(|&i| word[i] >= word[i + 1]) {
        if word[i] == word[i + 1] {
            word.drain(i..i + 2);
        } else {
            word.swap(i, i + 1);
        }
        sign = -sign;
    }
    (sign, word.iter().fold(0, |m, j| m | 1 << j))
}

fn oracle_mul(a: &CMultivector<f64>, b: &CMultivector<f64>) -> CMultivector<f64> {
    let n = a.rank();
    let mut out = vec![c(0.0, 0.0); 1 << n];
    for (j, x) in a.coeffs().iter().enumerate() {
        for (k, y) in b.coeffs().iter().enumerate() {
            let (s, l) = oracle_blade(j as u32, k as u32);
            out[l as usize] += x * y * s;
        }
    }
    CMultivector::new(n, out).unwrap()
}

/// `(a + ib)* = a* - i b*` with the blade sign `(-1)^{p(p+1)/2}`.
fn oracle_involution(a: &CMultivector<f64>) -> CMultivector<f64> {
    let coeffs = a
        .coeffs()
        .iter()
        .enumerate()
        .map(|(m, x)| {
            let p = (m as u32).count_ones();
            if (p * (p + 1) / 2).is_multiple_of(2) { x.conj() } else { -x.conj() }
        })
        .collect();
    CMultivector::new(a.rank(), coeffs).unwrap()
}

fn para(k: &Paravector<f64>) -> CMultivector<f64> {
    let n = k.rank();
    let mut out = vec![c(0.0, 0.0); 1 << n];
    for (j, x) in k.components().iter().enumerate() {
        out[if j == 0 { 0 } else { 1 << (j - 1) }] = c(*x, 0.0);
    }
    CMultivector::new(n, out).unwrap()
}

fn scalar(n: usize, z: C) -> CMultivector<f64> {
    let mut out = vec![c(0.0, 0.0); 1 << n];
    out[0] = z;
    CMultivector::new(n, out).unwrap()
}

fn sub(a: &CMultivector<f64>, b: &CMultivector<f64>) -> CMultivector<f64> {
    let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x - y).collect();
    CMultivector::new(a.rank(), coeffs).unwrap()
}

fn add(a: &CMultivector<f64>, b: &CMultivector<f64>) -> CMultivector<f64> {
    let coeffs = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x + y).collect();
    CMultivector::new(a.rank(), coeffs).unwrap()
}

fn scale(a: &CMultivector<f64>, s: C) -> CMultivector<f64> {
    CMultivector::new(a.rank(), a.coeffs().iter().map(|x| x * s).collect()).unwrap()
}

fn norm(a: &CMultivector<f64>) -> f64 {
    a.coeffs().iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn rel(a: &CMultivector<f64>, b: &CMultivector<f64>) -> f64 {
    norm(&sub(a, b)) / norm(b).max(1.0)
}

/// Eigenvalues `x ± i|y|` and idempotents `(1 ∓ i s)/2` of a nonreal paravector.
struct OracleSpectrum {
    s_plus: C,
    s_minus: C,
    iota_plus: CMultivector<f64>,
    iota_minus: CMultivector<f64>,
}

fn oracle_spectrum(k: &Paravector<f64>) -> Option<OracleSpectrum> {
    let comps = k.components();
    let y = comps[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    if y == 0.0 {
        return None;
    }
    let n = k.rank();
    let unit = |sign: f64| {
        let mut out = vec![c(0.0, 0.0); 1 << n];
        out[0] = c(0.5, 0.0);
        for j in 1..=n {
            out[1 << (j - 1)] = c(0.0, -sign * comps[j] / y / 2.0);
        }
        CMultivector::new(n, out).unwrap()
    };
    Some(OracleSpectrum { s_plus: c(comps[0], y), s_minus: c(comps[0], -y), iota_plus: unit(1.0), iota_minus: unit(-1.0) })
}

fn oracle_gfc(f: &StemFunction<f64>, k: &Paravector<f64>) -> Result<CMultivector<f64>> {
    match oracle_spectrum(k) {
        Some(sp) => Ok(add(&oracle_mul(&f.eval(sp.s_plus)?, &sp.iota_plus), &oracle_mul(&f.eval(sp.s_minus)?, &sp.iota_minus))),
        None => f.eval(c(k.components()[0], 0.0)),
    }
}

/// `I_d ⊗ L_a` on `C^(d 2^n)`, index `r 2^n + K`.
fn oracle_left_mult(a: &CMultivector<f64>, d: usize) -> CMat {
    let b = 1usize << a.rank();
    let mut m = CMat::zeros(d * b, d * b);
    for r in 0..d {
        for (j, x) in a.coeffs().iter().enumerate() {
            for k in 0..b {
                let (s, l) = oracle_blade(j as u32, k as u32);
                m[(r * b + l as usize, r * b + k)] += x * s;
            }
        }
    }
    m
}

/// Complexification of `T = Σ M_J e_J` acting on `C^d ⊗ K_n`.
fn oracle_tc(t: &CliffordOperator<f64>) -> CMat {
    let (d, b) = (t.dim(), 1usize << t.rank());
    let mut m = CMat::zeros(d * b, d * b);
    for (blade, comp) in t.components() {
        for k in 0..b {
            let (s, l) = oracle_blade(blade.bits(), k as u32);
            for r in 0..d {
                for col in 0..d {
                    m[(r * b + l as usize, col * b + k)] += c(comp[(r, col)] * s, 0.0);
                }
            }
        }
    }
    m
}

/// `Σ L_{A_k} T_C^k`.
fn oracle_operator_polynomial(coeffs: &[Multivector<f64>], t: &CliffordOperator<f64>) -> CMat {
    let tc = oracle_tc(t);
    let mut power = CMat::identity(tc.nrows(), tc.ncols());
    let mut acc = CMat::zeros(tc.nrows(), tc.ncols());
    for a in coeffs {
        acc += oracle_left_mult(&a.to_complex(), t.dim()) * &power;
        power = &power * &tc;
    }
    acc
}

fn eigs(m: &CMat) -> Vec<C> {
    Schur::new(m.clone()).eigenvalues().expect("complex Schur form is triangular").iter().copied().collect()
}

fn frob(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn rel_mat(a: &CMat, b: &CMat) -> f64 {
    frob(&(a - b)) / frob(b).max(1.0)
}

fn hausdorff(a: &[C], b: &[C]) -> f64 {
    let one_way = |x: &[C], y: &[C]| x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max);
    one_way(a, b).max(one_way(b, a))
}

/// Fourth-order central difference of `g` at `t = 0`.
fn derivative(g: impl Fn(f64) -> Result<CMultivector<f64>>, h: f64) -> Result<CMultivector<f64>> {
    let (p1, m1, p2, m2) = (g(h)?, g(-h)?, g(2.0 * h)?, g(-2.0 * h)?);
    let num = add(&scale(&sub(&p1, &m1), c(8.0, 0.0)), &sub(&m2, &p2));
    Ok(scale(&num, c(1.0 / (12.0 * h), 0.0)))
}

/// `|½(∂_x Φ + ∂_y Φ · s)|` at `κ = x + y s`.
fn oracle_dbar(phi: &dyn Fn(&Paravector<f64>) -> Result<CMultivector<f64>>, k: &Paravector<f64>, h: f64) -> Result<f64> {
    let comps = k.components();
    let y = comps[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
    let unit: Vec<f64> = comps[1..].iter().map(|v| v / y).collect();
    let at = |dx: f64, dy: f64| {
        let mut p = vec![comps[0] + dx];
        p.extend(unit.iter().map(|u| u * (y + dy)));
        phi(&Paravector::new(k.rank(), p).unwrap())
    };
    let s = para(&Paravector::new(k.rank(), std::iter::once(0.0).chain(unit.iter().copied()).collect()).unwrap());
    let dx = derivative(|t| at(t, 0.0), h)?;
    let dy = derivative(|t| at(0.0, t), h)?;
    Ok(norm(&add(&dx, &oracle_mul(&dy, &s))) / 2.0)
}

fn dsl_function(rng: &mut ChaCha8Rng, n: usize) -> Result<(String, StemFunction<f64>)> {
    let src = sampling::expr(rng, n, &ExprOptions::default()).to_string();
    let f = dsl::stem_function(&src, n, None)?;
    Ok((src, f))
}

fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 0.1 {
            return v.iter().map(|x| x / r).collect();
        }
    }
}

// ---------------------------------------------------------------------------
// Reporting

struct Check {
    label: String,
    worst: f64,
    bound: f64,
    at_least: bool,
}

impl Check {
    fn at_most(label: impl Into<String>, bound: f64) -> Self {
        Check { label: label.into(), worst: 0.0, bound, at_least: false }
    }

    fn at_least(label: impl Into<String>, bound: f64) -> Self {
        Check { label: label.into(), worst: f64::INFINITY, bound, at_least: true }
    }

    fn push(&mut self, v: f64) {
        self.worst = if v.is_nan() {
            f64::NAN
        } else if self.at_least {
            self.worst.min(v)
        } else {
            self.worst.max(v)
        };
    }

    fn passed(&self) -> bool {
        if self.at_least { self.worst >= self.bound } else { self.worst <= self.bound }
    }

    fn describe(&self) -> String {
        let op = if self.at_least { ">=" } else { "<=" };
        format!("{}: worst={:.3e} {op} {:.0e}", self.label, self.worst, self.bound)
    }
}

fn suite(name: &str) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for report in run_suite(name, &SuiteOptions::default())? {
        for r in report.checks {
            out.push(Check {
                label: format!("library suite {name}: {}", r.name),
                worst: r.worst,
                bound: r.bound,
                at_least: matches!(r.bound_kind, Bound::AtLeast),
            });
        }
    }
    Ok(out)
}

fn seeded(criterion: u64) -> ChaCha8Rng {
    sampling::rng(0x5eed_0000 + criterion)
}

// ---------------------------------------------------------------------------
// Criteria

fn algebra() -> Result<Vec<Check>> {
    let mut table = Check::at_most("blade table vs word-reduction oracle, n <= 5 (mismatches)", 0.0);
    let mut triples = Check::at_most("blade triple associativity, exact signs, n <= 5 (mismatches)", 0.0);
    let mut mismatches = 0usize;
    let mut bad_triples = 0usize;
    for n in 0..=5usize {
        let size = 1u32 << n;
        for a in 0..size {
            for b in 0..size {
                let (s, l) = basis_mul(BasisIndex(a), BasisIndex(b), n)?;
                let (os, ol) = oracle_blade(a, b);
                mismatches += usize::from(f64::from(s) != os || l.bits() != ol);
                for cc in 0..size {
                    let (s1, ab) = oracle_blade(a, b);
                    let (s2, left) = oracle_blade(ab, cc);
                    let (s3, bc) = oracle_blade(b, cc);
                    let (s4, right) = oracle_blade(a, bc);
                    let (t1, lab) = basis_mul(BasisIndex(a), BasisIndex(b), n)?;
                    let (t2, lib) = basis_mul(lab, BasisIndex(cc), n)?;
                    bad_triples += usize::from(left != right || s1 * s2 != s3 * s4);
                    bad_triples += usize::from(lib.bits() != left || f64::from(t1 * t2) != s1 * s2);
                }
            }
        }
    }
    table.push(mismatches as f64);
    triples.push(bad_triples as f64);

    let mut rng = seeded(1);
    let mut product = Check::at_most("dense product vs oracle, n <= 6", 1e-12);
    let mut assoc = Check::at_most("dense associativity, n <= 6", 1e-12);
    let mut anti = Check::at_most("e_j e_k = -e_k e_j and e_j^2 = -1, n <= 6", 1e-12);
    let mut invol = Check::at_most("involution: blade signs and (ab)* = b* a*, n <= 6", 1e-12);
    for n in 0..=6usize {
        for _ in 0..20 {
            let a: CMultivector<f64> = sampling::cmultivector(&mut rng, n, 1.0);
            let b: CMultivector<f64> = sampling::cmultivector(&mut rng, n, 1.0);
            let x: CMultivector<f64> = sampling::cmultivector(&mut rng, n, 1.0);
            let ab = a.try_mul(&b)?;
            product.push(rel(&ab, &oracle_mul(&a, &b)));
            assoc.push(rel(&ab.try_mul(&x)?, &a.try_mul(&b.try_mul(&x)?)?));
            invol.push(rel(&a.involution(), &oracle_involution(&a)));
            invol.push(rel(&ab.involution(), &b.involution().try_mul(&a.involution())?));
        }
        for j in 1..=n {
            let ej = Multivector::<f64>::generator(n, j)?.to_complex();
            anti.push(rel(&ej.try_mul(&ej)?, &scalar(n, c(-1.0, 0.0))));
            for k in j + 1..=n {
                let ek = Multivector::<f64>::generator(n, k)?.to_complex();
                anti.push(rel(&ej.try_mul(&ek)?, &scale(&ek.try_mul(&ej)?, c(-1.0, 0.0))));
            }
        }
    }
    let mut checks = vec![table, triples, product, assoc, anti, invol];
    checks.extend(suite("algebra")?);
    Ok(checks)
}

fn paravector_identities() -> Result<Vec<Check>> {
    let mut rng = seeded(2);
    let mut normsq = Check::at_most("scalar(k k*) vs sum of squared components", 1e-12);
    let mut back = Check::at_most("(lambda - k) R(lambda) = R(lambda) (lambda - k) = 1", 1e-12);
    for case in 0..1000 {
        let n = case % 6;
        let k: Paravector<f64> = sampling::paravector(&mut rng, n, 2.0);
        let sq: f64 = k.components().iter().map(|x| x * x).sum();
        let prod = oracle_mul(&para(&k), &k.conj().to_cmultivector());
        normsq.push((prod.coeffs()[0].re - sq).abs() / sq.max(1.0));
        normsq.push((k.norm_sqr() - sq).abs() / sq.max(1.0));
        let lambda = sampling::complex_point(&mut rng, 3.0);
        let r = resolvent(lambda, &k)?;
        let shifted = sub(&scalar(n, lambda), &para(&k));
        let one = scalar(n, c(1.0, 0.0));
        back.push(rel(&oracle_mul(&shifted, &r), &one).max(rel(&oracle_mul(&r, &shifted), &one)));
    }
    let mut checks = vec![normsq, back];
    checks.extend(suite("paravector")?);
    Ok(checks)
}

fn projections() -> Result<Vec<Check>> {
    let mut rng = seeded(3);
    let mut matches = Check::at_most("library spectrum and idempotents vs oracle", 1e-12);
    let mut idem = Check::at_most("idempotence", 1e-12);
    let mut annihilate = Check::at_most("mutual annihilation", 1e-12);
    let mut partition = Check::at_most("partition of identity", 1e-12);
    let mut decomposition = Check::at_most("k a = s+ iota+ a + s- iota- a", 1e-12);
    for case in 0..500 {
        let n = 1 + case % 4;
        let k: Paravector<f64> = sampling::nonreal_paravector(&mut rng, n, 2.0, 1e-3);
        let a: CMultivector<f64> = sampling::cmultivector(&mut rng, n, 1.0);
        let sp = oracle_spectrum(&k).expect("nonreal sample");
        let data = eigenvalues(&k);
        let (ip, im) = (data.iota_plus.clone().expect("nonreal"), data.iota_minus.clone().expect("nonreal"));
        matches.push((data.s_plus - sp.s_plus).norm().max((data.s_minus - sp.s_minus).norm()));
        matches.push(rel(&ip, &sp.iota_plus).max(rel(&im, &sp.iota_minus)));
        idem.push(rel(&oracle_mul(&ip, &ip), &ip).max(rel(&oracle_mul(&im, &im), &im)));
        annihilate.push(norm(&oracle_mul(&ip, &im)).max(norm(&oracle_mul(&im, &ip))));
        partition.push(rel(&add(&ip, &im), &scalar(n, c(1.0, 0.0))));
        let split = add(&scale(&oracle_mul(&ip, &a), sp.s_plus), &scale(&oracle_mul(&im, &a), sp.s_minus));
        decomposition.push(rel(&split, &oracle_mul(&para(&k), &a)));
    }
    let mut checks = vec![matches, idem, annihilate, partition, decomposition];
    checks.extend(suite("projections")?);
    Ok(checks)
}

fn sym_spec() -> Result<Vec<Check>> {
    let mut rng = seeded(4);
    let mut direct = Check::at_most("gfc_eval vs oracle F(s+) iota+ + F(s-) iota-", 1e-12);
    let mut real = Check::at_most("imaginary part of F_sigma for 50 stem F x 50 points", 1e-10);
    for case in 0..50 {
        let n = case % 5;
        let (_, f) = dsl_function(&mut rng, n)?;
        for _ in 0..50 {
            let k = sampling::paravector(&mut rng, n, 1.5);
            let v = gfc_eval(&f, &k)?;
            direct.push(rel(&v, &oracle_gfc(&f, &k)?));
            real.push(norm(&v.imag_part().to_complex()));
        }
    }
    let mut witness = Check::at_least("best witness imaginary part for each of 10 non-stem F", 1e-3);
    for (_, f) in sampling::non_stem_functions(2) {
        let mut best = 0.0f64;
        for _ in 0..50 {
            let k = sampling::nonreal_paravector(&mut rng, 2, 1.5, 0.1);
            best = best.max(norm(&oracle_gfc(&f, &k)?.imag_part().to_complex()));
        }
        witness.push(best);
    }
    let mut checks = vec![real, witness, direct];
    checks.extend(suite("sym-spec")?);
    Ok(checks)
}

fn agreement() -> Result<Vec<Check>> {
    let mut rng = seeded(5);
    let base = ContourPolicy::default();
    let other = ContourPolicy { radius_frac: 0.3, ..base };
    let opts = QuadratureOptions::default();
    let mut agree = Check::at_most("Cauchy transform vs oracle calculus, 100 pairs, n <= 4", 1e-8);
    let mut independent = Check::at_most("contour independence across two radius policies", 1e-10);
    for case in 0..100 {
        let n = case % 5;
        let (_, f) = dsl_function(&mut rng, n)?;
        let k = sampling::paravector(&mut rng, n, 1.5);
        let oracle = oracle_gfc(&f, &k)?;
        let c1 = cauchy_transform(&f, &k, &contour_for(&f, &k, &base)?, &opts)?;
        let c2 = cauchy_transform(&f, &k, &contour_for(&f, &k, &other)?, &opts)?;
        agree.push(rel(&c1, &oracle));
        independent.push(rel(&c1, &c2));
    }
    let mut checks = vec![agree, independent];
    checks.extend(suite("agreement")?);
    Ok(checks)
}

fn regularity() -> Result<Vec<Check>> {
    let mut rng = seeded(6);
    let (policy, opts, h) = (ContourPolicy::default(), QuadratureOptions::default(), 1e-4);
    let mut regular = Check::at_most("fourth-order slice dbar of Cauchy transforms, 20 F x 20 points", 1e-6);
    for case in 0..20 {
        let n = 1 + case % 4;
        let (_, f) = dsl_function(&mut rng, n)?;
        for _ in 0..20 {
            let k = sampling::nonreal_paravector(&mut rng, n, 1.5, 0.2);
            let contour = contour_for(&f, &k, &policy)?;
            let phi = |p: &Paravector<f64>| cauchy_transform(&f, p, &contour, &opts);
            regular.push(oracle_dbar(&phi, &k, h)?);
        }
    }
    let mut anti = Check::at_least("anti-regular witness k -> k*", 0.5);
    for _ in 0..5 {
        let k = sampling::nonreal_paravector(&mut rng, 3, 1.5, 0.2);
        anti.push(oracle_dbar(&|p: &Paravector<f64>| Ok(para(&p.conj())), &k, h)?);
    }
    let mut checks = vec![regular, anti];
    checks.extend(suite("regularity")?);
    Ok(checks)
}

fn multiplicativity() -> Result<Vec<Check>> {
    let mut rng = seeded(7);
    let (policy, opts) = (ContourPolicy::default(), QuadratureOptions::default());
    let mut direct = Check::at_most("(F f)_sigma = F_sigma f_sigma", 1e-8);
    let mut poly = Check::at_most("P_sigma(k) = sum a_j k^j", 1e-10);
    for case in 0..50 {
        let n = case % 5;
        let (big, fbig) = dsl_function(&mut rng, n)?;
        let small = sampling::expr(&mut rng, 0, &ExprOptions::default()).to_string();
        let fsmall = dsl::stem_function(&small, n, None)?;
        let prod = dsl::stem_function(&format!("({big})*({small})"), n, None)?;
        let k = sampling::paravector(&mut rng, n, 1.5);
        let expected = oracle_mul(&oracle_gfc(&fbig, &k)?, &oracle_gfc(&fsmall, &k)?);
        direct.push(rel(&gfc_eval(&prod, &k)?, &expected));

        let coeffs = sampling::polynomial_coeffs(&mut rng, n, 4, 1.0);
        let p = dsl::stem_function(&sampling::polynomial_expr(&coeffs).to_string(), n, None)?;
        let mut power = scalar(n, c(1.0, 0.0));
        let mut sum = scalar(n, c(0.0, 0.0));
        for a in &coeffs {
            sum = add(&sum, &oracle_mul(&a.to_complex(), &power));
            power = oracle_mul(&power, &para(&k));
        }
        poly.push(rel(&gfc_eval(&p, &k)?, &sum));
    }
    let mut operator = Check::at_most("(f g)(T) = f(T) g(T)", 1e-8);
    let mut op_poly = Check::at_most("P(T) = sum A_j T^j", 1e-10);
    for case in 0..10 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator::<f64>(&mut rng, d, n, 0.3);
        let f = sampling::expr(&mut rng, 0, &ExprOptions::default()).to_string();
        let g = sampling::expr(&mut rng, 0, &ExprOptions::default()).to_string();
        let rd = |src: &str| -> Result<CMat> {
            riesz_dunford_matrix(&dsl::stem_function(src, n, None)?, &t, None, &policy, &opts)
        };
        operator.push(rel_mat(&(rd(&f)? * rd(&g)?), &rd(&format!("({f})*({g})"))?));

        let coeffs = sampling::polynomial_coeffs(&mut rng, n, 3, 1.0);
        let value = rd(&sampling::polynomial_expr(&coeffs).to_string())?;
        op_poly.push(rel_mat(&value, &oracle_operator_polynomial(&coeffs, &t)));
    }
    let mut checks = vec![direct, poly, operator, op_poly];
    checks.extend(suite("multiplicativity")?);
    Ok(checks)
}

fn op_spectra() -> Result<Vec<Check>> {
    let mut rng = seeded(8);
    let mut disagree = Check::at_most("membership vs oracle eigenvalue intersection, 200 cases (disagreements)", 0.0);
    let mut members = Check::at_least("members among the samples (count)", 50.0);
    let mut pairing = Check::at_most("conjugate symmetry of the oracle spectrum", 1e-10);
    let mut library = Check::at_most("T_C vs oracle complexification", 1e-14);
    let (mut bad, mut found) = (0usize, 0usize);
    for case in 0..200 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator::<f64>(&mut rng, d, n, 1.0);
        let tc = oracle_tc(&t);
        library.push(rel_mat(&t.complexify(), &tc));
        let spectrum = eigs(&tc);
        let conj: Vec<C> = spectrum.iter().map(|z| z.conj()).collect();
        let scale = spectrum.iter().map(|z| z.norm()).fold(1.0, f64::max);
        pairing.push(hausdorff(&spectrum, &conj) / scale);

        let k = if case % 2 == 0 {
            let lambda = spectrum[rng.random_range(0..spectrum.len())];
            if n == 0 {
                match spectrum.iter().find(|z| z.im.abs() < 1e-12) {
                    Some(z) => Paravector::real(0, z.re),
                    None => sampling::paravector(&mut rng, 0, 2.0),
                }
            } else {
                let unit = random_unit(&mut rng, n);
                let comps = std::iter::once(lambda.re).chain(unit.iter().map(|u| u * lambda.im.abs())).collect();
                Paravector::new(n, comps)?
            }
        } else {
            sampling::paravector(&mut rng, n, 2.0)
        };
        let comps = k.components();
        let y = comps[1..].iter().map(|v| v * v).sum::<f64>().sqrt();
        let s_plus = c(comps[0], y);
        let oracle = spectrum.iter().any(|z| (z - s_plus).norm() <= 1e-8 * (1.0 + s_plus.norm()));
        let member = cl_spectrum_membership(&t, &k).member;
        bad += usize::from(member != oracle);
        found += usize::from(oracle);
    }
    disagree.push(bad as f64);
    members.push(found as f64);
    let mut checks = vec![disagree, pairing, members, library];
    checks.extend(suite("op-spectra")?);
    Ok(checks)
}

fn flat() -> Result<Vec<Check>> {
    let mut rng = seeded(9);
    let (policy, opts) = (ContourPolicy::default(), QuadratureOptions::default());
    let flat_residual = |m: &CMat| frob(&(m - m.map(|z| z.conj()))) / frob(m).max(1.0);
    let mut stem = Check::at_most("flat residual of F(T_C) for stem F", 1e-9);
    for case in 0..10 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator::<f64>(&mut rng, d, n, 0.3);
        let (_, f) = dsl_function(&mut rng, n)?;
        stem.push(flat_residual(&riesz_dunford_matrix(&f, &t, None, &policy, &opts)?));
    }
    let mut witness = Check::at_least("flat residual for non-stem F", 1e-3);
    let t = sampling::operator::<f64>(&mut rng, 2, 2, 0.3);
    for (_, f) in sampling::non_stem_functions(2).into_iter().take(3) {
        witness.push(flat_residual(&riesz_dunford_matrix(&f, &t, None, &policy, &opts)?));
    }
    let mut checks = vec![stem, witness];
    checks.extend(suite("flat")?);
    Ok(checks)
}

fn equivalence() -> Result<Vec<Check>> {
    let mut rng = seeded(10);
    let (policy, opts) = (ContourPolicy::default(), QuadratureOptions::default());
    let mut diff = Check::at_most("slice calculus vs Riesz-Dunford (Frobenius), 20 cases", 1e-6);
    let mut oracle = Check::at_most("both calculi vs sum L_{A_j} T_C^j", 1e-8);
    for case in 0..20 {
        let (d, n) = (1 + case % 3, 1 + case % 2);
        let t = sampling::operator::<f64>(&mut rng, d, n, 0.4);
        let coeffs = sampling::polynomial_coeffs(&mut rng, n, 3, 1.0);
        let f = dsl::stem_function(&sampling::polynomial_expr(&coeffs).to_string(), n, None)?;
        let unit = Paravector::new(n, std::iter::once(0.0).chain(random_unit(&mut rng, n)).collect())?;
        let rd = riesz_dunford_matrix(&f, &t, None, &policy, &opts)?;
        let sl = slice_calculus_matrix(&f, &t, &unit, None, &policy, &opts)?;
        let expected = oracle_operator_polynomial(&coeffs, &t);
        diff.push(frob(&(&rd - &sl)));
        oracle.push(rel_mat(&rd, &expected).max(rel_mat(&sl, &expected)));
    }
    let mut checks = vec![diff, oracle];
    checks.extend(suite("equivalence")?);
    Ok(checks)
}

fn spectral_mapping() -> Result<Vec<Check>> {
    let mut rng = seeded(11);
    let (policy, opts) = (ContourPolicy::default(), QuadratureOptions::default());
    let mut dist = Check::at_most("Hausdorff f(sigma(T)) vs sigma(f(T)), 20 polynomial cases", 1e-6);
    for case in 0..20 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator::<f64>(&mut rng, d, n, 0.5);
        let degree = rng.random_range(1..=3);
        let src = sampling::scalar_polynomial_expr(&mut rng, degree, 1.0).to_string();
        let f = dsl::stem_function(&src, n, None)?;
        let mapped = eigs(&oracle_tc(&t)).iter().map(|&z| Ok(f.eval(z)?.coeffs()[0])).collect::<Result<Vec<C>>>()?;
        let ft = eigs(&riesz_dunford_matrix(&f, &t, None, &policy, &opts)?);
        dist.push(hausdorff(&mapped, &ft));
    }
    let mut checks = vec![dist];
    checks.extend(suite("spectral-mapping")?);
    Ok(checks)
}

fn lift() -> Result<Vec<Check>> {
    let mut rng = seeded(12);
    let mut lifted = Check::at_most("lift of the slice restriction reproduces F, 100 points", 1e-10);
    let mut calculus = Check::at_most("calculus of the lift vs oracle calculus of F", 1e-10);
    for case in 0..10 {
        let n = 1 + case % 4;
        let (_, f) = dsl_function(&mut rng, n)?;
        let s = Paravector::new(n, std::iter::once(0.0).chain(random_unit(&mut rng, n)).collect())?;
        let g = slice_lift(slice_restriction(&f, &s), &s, f.domain().clone())?;
        for _ in 0..10 {
            let z = sampling::complex_point(&mut rng, 2.5);
            lifted.push(rel(&g.eval(z)?, &f.eval(z)?));
            let k = sampling::paravector(&mut rng, n, 1.5);
            calculus.push(rel(&gfc_eval(&g, &k)?, &oracle_gfc(&f, &k)?));
        }
    }
    let mut checks = vec![lifted, calculus];
    checks.extend(suite("lift")?);
    Ok(checks)
}

fn jobs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/jobs")
}

fn run_child(file: &Path) -> std::io::Result<Vec<u8>> {
    let out = Command::new(std::env::current_exe()?).env(JOB_ENV, file).output()?;
    if !out.status.success() {
        return Err(std::io::Error::other(String::from_utf8_lossy(&out.stderr).into_owned()));
    }
    Ok(out.stdout)
}

fn determinism() -> Result<Vec<Check>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(jobs_dir())
        .map_err(|e| Error::Invalid(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| std::fs::read_to_string(p).is_ok_and(|t| t.contains("\"command\"")))
        .collect();
    files.sort();
    let mut count = Check::at_least("job files exercised", 8.0);
    let mut differ = Check::at_most("job files whose two runs differ in any byte", 0.0);
    let mut bad = 0usize;
    for file in &files {
        let first = run_child(file).map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
        let second = run_child(file).map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
        bad += usize::from(first != second || first.is_empty());
    }
    count.push(files.len() as f64);
    differ.push(bad as f64);
    Ok(vec![differ, count])
}

fn job_child(path: &str) -> ExitCode {
    let path = Path::new(path);
    let result = std::fs::read_to_string(path)
        .map_err(|e| Error::Invalid(e.to_string()))
        .and_then(|t| JobSpec::from_json_str(&t))
        .and_then(|spec| run_job(&spec, path.parent().unwrap_or(Path::new("."))));
    match result {
        Ok(out) => {
            print!("{}", render(&out.report));
            if out.passed { ExitCode::SUCCESS } else { ExitCode::from(2) }
        }
        Err(e) => {
            print!("{}", render(&error_report(&e)));
            eprintln!("{e}");
            ExitCode::from(1)
        }
    }
}

type Criterion = fn() -> Result<Vec<Check>>;

fn main() -> ExitCode {
    if let Ok(path) = std::env::var(JOB_ENV) {
        return job_child(&path);
    }
    let criteria: [(&str, Criterion); 13] = [
        ("algebra", algebra),
        ("paravector identities", paravector_identities),
        ("spectral projections", projections),
        ("real values of stem functions", sym_spec),
        ("Cauchy transform agreement", agreement),
        ("slice regularity", regularity),
        ("multiplicativity", multiplicativity),
        ("operator spectra", op_spectra),
        ("flat invariance", flat),
        ("calculus equivalence", equivalence),
        ("spectral mapping", spectral_mapping),
        ("representation and lift", lift),
        ("job determinism", determinism),
    ];
    let mut failed = 0;
    let start = Instant::now();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match run() {
            Ok(checks) => {
                let ok = checks.iter().all(Check::passed);
                failed += usize::from(!ok);
                let mark = if ok { "PASS" } else { "FAIL" };
                println!("[{mark}] {:>2} {name}: {} ({:.1}s)", i + 1, checks[0].describe(), t.elapsed().as_secs_f64());
                for ch in &checks[1..] {
                    println!("          {} {}", if ch.passed() { "ok  " } else { "FAIL" }, ch.describe());
                }
            }
            Err(e) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: error: {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
