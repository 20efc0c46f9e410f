//! Named property suites with worst-case residual reports.
//!
//! Every suite is deterministic for a given [`SuiteOptions::seed`].

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cauchy::{
    cauchy_transform, contour_for, slice_regularity_residual, ContourPolicy, QuadratureOptions, DEFAULT_FD_STEP,
};
use crate::clifford::{basis_mul, BasisIndex, CMultivector, Multivector, Paravector};
use crate::dsl::{self, Expr};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, DEFAULT_SIZE_CAP};
use crate::operator::{
    cl_spectrum_membership, cl_spectrum_slice, complex_spectrum, flat_residual, riesz_dunford_eval,
    riesz_dunford_matrix, slice_calculus_matrix, spectral_intersection_membership, spectral_mapping_check,
    DEFAULT_FLAT_TOL, DEFAULT_INTERSECTION_TOL,
};
use crate::sampling::{self, ExprOptions};
use crate::scalar::cx;
use crate::spectral::{eigenvalues, left_mult_decomposition_check, resolvent};
use crate::stem::{gfc_eval, product_rule_check, slice_lift, slice_restriction, verify_stem, StemFunction};

/// Suite names accepted by [`run_suite`], besides `all`.
pub const SUITES: [&str; 12] = [
    "algebra",
    "paravector",
    "projections",
    "sym-spec",
    "agreement",
    "regularity",
    "multiplicativity",
    "op-spectra",
    "flat",
    "equivalence",
    "spectral-mapping",
    "lift",
];

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub seed: u64,
    pub policy: ContourPolicy<f64>,
    pub quadrature: QuadratureOptions<f64>,
    pub fd_step: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            seed: sampling::DEFAULT_SEED,
            policy: ContourPolicy::default(),
            quadrature: QuadratureOptions::default(),
            fd_step: DEFAULT_FD_STEP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    /// Passes when the largest observed value is at most the bound.
    AtMost,
    /// Passes when the smallest observed value is at least the bound.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub cases: usize,
    pub bound_kind: Bound,
    pub bound: f64,
    /// Largest value for `at-most` checks, smallest for `at-least` checks.
    pub worst: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

struct Tracker {
    name: &'static str,
    kind: Bound,
    bound: f64,
    cases: usize,
    worst: Option<f64>,
}

impl Tracker {
    fn at_most(name: &'static str, bound: f64) -> Self {
        Tracker { name, kind: Bound::AtMost, bound, cases: 0, worst: None }
    }

    fn at_least(name: &'static str, bound: f64) -> Self {
        Tracker { name, kind: Bound::AtLeast, bound, cases: 0, worst: None }
    }

    fn push(&mut self, v: f64) {
        self.cases += 1;
        let replace = match (self.worst, self.kind) {
            (None, _) => true,
            (Some(w), _) if w.is_nan() => false,
            (Some(w), Bound::AtMost) => v.is_nan() || v > w,
            (Some(w), Bound::AtLeast) => v.is_nan() || v < w,
        };
        if replace {
            self.worst = Some(v);
        }
    }

    fn finish(self) -> CheckReport {
        let worst = self.worst.unwrap_or(f64::NAN);
        let passed = match self.kind {
            Bound::AtMost => worst <= self.bound,
            Bound::AtLeast => worst >= self.bound,
        };
        CheckReport { name: self.name, cases: self.cases, bound_kind: self.kind, bound: self.bound, worst, passed }
    }
}

fn report(suite: &'static str, opts: &SuiteOptions, trackers: Vec<Tracker>) -> SuiteReport {
    let checks: Vec<CheckReport> = trackers.into_iter().map(Tracker::finish).collect();
    SuiteReport { suite, seed: opts.seed, passed: checks.iter().all(|c| c.passed), checks }
}

/// `|a - b| / max(1, |b|)`.
fn rel(a: &CMultivector<f64>, b: &CMultivector<f64>) -> f64 {
    a.dist(b) / b.norm().max(1.0)
}

fn rel_matrix(a: &DMatrix<num_complex::Complex<f64>>, b: &DMatrix<num_complex::Complex<f64>>) -> f64 {
    frobenius(&(a - b)) / frobenius(b).max(1.0)
}

/// Runs one named suite, or every suite for `"all"`.
pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, opts)).collect();
    }
    Ok(vec![run_one(name, opts)?])
}

fn run_one(name: &str, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut rng = sampling::rng(opts.seed);
    let rng = &mut rng;
    match name {
        "algebra" => algebra(rng, opts),
        "paravector" => paravector(rng, opts),
        "projections" => projections(rng, opts),
        "sym-spec" => sym_spec(rng, opts),
        "agreement" => agreement(rng, opts),
        "regularity" => regularity(rng, opts),
        "multiplicativity" => multiplicativity(rng, opts),
        "op-spectra" => op_spectra(rng, opts),
        "flat" => flat(rng, opts),
        "equivalence" => equivalence(rng, opts),
        "spectral-mapping" => spectral_mapping(rng, opts),
        "lift" => lift(rng, opts),
        other => Err(Error::Invalid(format!("unknown suite {other:?}; expected one of {} or all", SUITES.join(", ")))),
    }
}

fn dsl_function(rng: &mut ChaCha8Rng, n: usize, options: &ExprOptions) -> Result<StemFunction<f64>> {
    let e = sampling::expr(rng, n, options);
    dsl::stem_function(&e.to_string(), n, None)
}

fn from_expr(e: &Expr, n: usize) -> Result<StemFunction<f64>> {
    dsl::stem_function(&e.to_string(), n, None)
}

fn algebra(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut exhaustive = Tracker::at_most("blade triple associativity, n <= 5 (mismatches)", 0.0);
    for n in 0..=5usize {
        let size = 1u32 << n;
        let mut mismatches = 0usize;
        for a in 0..size {
            for b in 0..size {
                let (s_ab, ab) = basis_mul(BasisIndex(a), BasisIndex(b), n)?;
                for c in 0..size {
                    let (s_l, l) = basis_mul(ab, BasisIndex(c), n)?;
                    let (s_bc, bc) = basis_mul(BasisIndex(b), BasisIndex(c), n)?;
                    let (s_r, r) = basis_mul(BasisIndex(a), bc, n)?;
                    if l != r || s_ab * s_l != s_bc * s_r {
                        mismatches += 1;
                    }
                }
            }
        }
        exhaustive.push(mismatches as f64);
    }
    let mut assoc = Tracker::at_most("dense associativity, n <= 6", 1e-12);
    let mut anti = Tracker::at_most("generator anticommutation and squares, n <= 6", 1e-12);
    let mut invol = Tracker::at_most("involution reverses products, n <= 6", 1e-12);
    let mut bar = Tracker::at_most("conjugation is multiplicative, n <= 6", 1e-12);
    for n in 0..=6usize {
        for _ in 0..10 {
            let a: CMultivector<f64> = sampling::cmultivector(rng, n, 1.0);
            let b: CMultivector<f64> = sampling::cmultivector(rng, n, 1.0);
            let c: CMultivector<f64> = sampling::cmultivector(rng, n, 1.0);
            assoc.push(rel(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
            invol.push(rel(&(&a * &b).involution(), &(&b.involution() * &a.involution())));
            bar.push(rel(&(&a * &b).conjugation_bar(), &(&a.conjugation_bar() * &b.conjugation_bar())));
        }
        for j in 1..=n {
            let ej = Multivector::<f64>::generator(n, j)?.to_complex();
            anti.push(rel(&(&ej * &ej), &CMultivector::scalar(n, cx(-1.0, 0.0))));
            for k in j + 1..=n {
                let ek = Multivector::<f64>::generator(n, k)?.to_complex();
                anti.push(rel(&(&ej * &ek), &(&ek * &ej).scale_real(-1.0)));
            }
        }
    }
    Ok(report("algebra", opts, vec![exhaustive, assoc, anti, invol, bar]))
}

fn paravector(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut norm = Tracker::at_most("scalar part of k k* equals |k|^2", 1e-12);
    let mut back = Tracker::at_most("(lambda - k) R(lambda) = 1", 1e-12);
    for case in 0..1000 {
        let n = case % 5;
        let k: Paravector<f64> = sampling::paravector(rng, n, 2.0);
        let km = k.to_cmultivector();
        let prod = &km * &k.conj().to_cmultivector();
        norm.push((prod.coeffs()[0].re - k.norm_sqr()).abs() / k.norm_sqr().max(1.0));
        let lambda = sampling::complex_point(rng, 3.0);
        let r = resolvent(lambda, &k)?;
        let shifted = CMultivector::scalar(n, lambda).try_sub(&km)?;
        back.push(rel(&(&shifted * &r), &CMultivector::one(n)));
    }
    Ok(report("paravector", opts, vec![norm, back]))
}

fn projections(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut idem = Tracker::at_most("idempotence", 1e-12);
    let mut annihilate = Tracker::at_most("mutual annihilation", 1e-12);
    let mut partition = Tracker::at_most("partition of identity", 1e-12);
    let mut decomposition = Tracker::at_most("left multiplication splits over the eigenvalues", 1e-12);
    for case in 0..500 {
        let n = 1 + case % 4;
        let k: Paravector<f64> = sampling::nonreal_paravector(rng, n, 2.0, 1e-3);
        let a: CMultivector<f64> = sampling::cmultivector(rng, n, 1.0);
        let data = eigenvalues(&k);
        let (ip, im) = (data.iota_plus.expect("nonreal"), data.iota_minus.expect("nonreal"));
        idem.push(rel(&(&ip * &ip), &ip).max(rel(&(&im * &im), &im)));
        annihilate.push((&ip * &im).norm().max((&im * &ip).norm()));
        partition.push(rel(&(&ip + &im), &CMultivector::one(n)));
        decomposition.push(left_mult_decomposition_check(&k, &a)? / a.norm().max(1.0));
    }
    Ok(report("projections", opts, vec![idem, annihilate, partition, decomposition]))
}

fn sym_spec(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut stem = Tracker::at_most("sampled stem residual of DSL functions", 1e-12);
    let mut real = Tracker::at_most("imaginary part of F_sigma for stem F", 1e-10);
    for case in 0..50 {
        let n = case % 5;
        let f = dsl_function(rng, n, &ExprOptions::default())?;
        stem.push(verify_stem(&f, f.domain(), 64, 1e-12)?.worst);
        for _ in 0..50 {
            let k = sampling::paravector(rng, n, 1.5);
            real.push(gfc_eval(&f, &k)?.imag_norm());
        }
    }
    let mut witness = Tracker::at_least("largest imaginary part for each non-stem F", 1e-3);
    for (_, f) in sampling::non_stem_functions(2) {
        let mut best = 0.0f64;
        for _ in 0..50 {
            let k = sampling::nonreal_paravector(rng, 2, 1.5, 0.1);
            best = best.max(gfc_eval(&f, &k)?.imag_norm());
        }
        witness.push(best);
    }
    Ok(report("sym-spec", opts, vec![stem, real, witness]))
}

fn agreement(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut agree = Tracker::at_most("Cauchy transform vs direct calculus", 1e-8);
    let mut independent = Tracker::at_most("two radius policies agree", 1e-10);
    let other = ContourPolicy { radius_frac: opts.policy.radius_frac * 0.6, ..opts.policy };
    for case in 0..100 {
        let n = case % 5;
        let f = dsl_function(rng, n, &ExprOptions::default())?;
        let k = sampling::paravector(rng, n, 1.5);
        let direct = gfc_eval(&f, &k)?;
        let c1 = cauchy_transform(&f, &k, &contour_for(&f, &k, &opts.policy)?, &opts.quadrature)?;
        let c2 = cauchy_transform(&f, &k, &contour_for(&f, &k, &other)?, &opts.quadrature)?;
        agree.push(rel(&c1, &direct));
        independent.push(rel(&c1, &c2));
    }
    Ok(report("agreement", opts, vec![agree, independent]))
}

fn regularity(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut regular = Tracker::at_most("slice derivative of Cauchy transforms", 1e-6);
    for case in 0..20 {
        let n = 1 + case % 4;
        let f = dsl_function(rng, n, &ExprOptions::default())?;
        for _ in 0..20 {
            let k = sampling::nonreal_paravector(rng, n, 1.5, 0.2);
            let contour = contour_for(&f, &k, &opts.policy)?;
            let phi = |p: &Paravector<f64>| cauchy_transform(&f, p, &contour, &opts.quadrature);
            regular.push(slice_regularity_residual(&phi, &k, opts.fd_step)?);
        }
    }
    let mut anti = Tracker::at_least("anti-regular witness k -> k*", 0.5);
    let k = sampling::nonreal_paravector(rng, 2, 1.5, 0.2);
    anti.push(slice_regularity_residual(&|p: &Paravector<f64>| Ok(p.conj().to_cmultivector()), &k, opts.fd_step)?);
    Ok(report("regularity", opts, vec![regular, anti]))
}

fn multiplicativity(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut direct = Tracker::at_most("(F f)_sigma = F_sigma f_sigma", 1e-8);
    let mut poly = Tracker::at_most("P_sigma(k) = sum a_j k^j", 1e-10);
    for case in 0..50 {
        let n = case % 5;
        let big = dsl_function(rng, n, &ExprOptions::default())?;
        let small = from_expr(&sampling::expr(rng, 0, &ExprOptions::default()), n)?;
        let k = sampling::paravector(rng, n, 1.5);
        direct.push(product_rule_check(&big, &small, &k)? / gfc_eval(&big.product(&small)?, &k)?.norm().max(1.0));

        let coeffs = sampling::polynomial_coeffs(rng, n, 4, 1.0);
        let p = from_expr(&sampling::polynomial_expr(&coeffs), n)?;
        let km = k.to_cmultivector();
        let mut power = CMultivector::one(n);
        let mut expected = CMultivector::zero(n);
        for a in &coeffs {
            expected = expected.try_add(&(&a.to_complex() * &power))?;
            power = &power * &km;
        }
        poly.push(rel(&gfc_eval(&p, &k)?, &expected));
    }
    let mut operator = Tracker::at_most("(f g)(T) = f(T) g(T) and (F f)(T) = F(T) f(T)", 1e-8);
    let mut op_poly = Tracker::at_most("P(T) = sum A_j T^j", 1e-10);
    for case in 0..10 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator(rng, d, n, 0.3);
        let f = from_expr(&sampling::expr(rng, 0, &ExprOptions::default()), n)?;
        let g = from_expr(&sampling::expr(rng, 0, &ExprOptions::default()), n)?;
        let big = dsl_function(rng, n, &ExprOptions::default())?;
        let rd = |h: &StemFunction<f64>| riesz_dunford_matrix(h, &t, None, &opts.policy, &opts.quadrature);
        let (ft, gt, bt) = (rd(&f)?, rd(&g)?, rd(&big)?);
        operator.push(rel_matrix(&(&ft * &gt), &rd(&f.product(&g)?)?));
        operator.push(rel_matrix(&(&bt * &ft), &rd(&big.product(&f)?)?));

        let coeffs = sampling::polynomial_coeffs(rng, n, 3, 1.0);
        let p = from_expr(&sampling::polynomial_expr(&coeffs), n)?;
        let value = riesz_dunford_eval(&p, &t, None, &opts.policy, &opts.quadrature, DEFAULT_FLAT_TOL)?;
        let expected = t.polynomial(&coeffs)?;
        op_poly.push(value.operator.distance(&expected)? / frobenius(&expected.complexify()).max(1.0));
    }
    Ok(report("multiplicativity", opts, vec![direct, poly, operator, op_poly]))
}

fn op_spectra(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut disagree = Tracker::at_most("membership disagreements (count)", 0.0);
    let mut pairing = Tracker::at_most("conjugate pairing defect", 1e-10);
    let mut members = Tracker::at_least("spectrum members among the samples (count)", 50.0);
    let (mut count, mut found) = (0usize, 0usize);
    for case in 0..200 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator::<f64>(rng, d, n, 1.0);
        let spectrum = complex_spectrum(&t)?;
        pairing.push(spectrum.pairing_defect);
        let k = match (case % 4, n) {
            // Slice representative of an eigenvalue: a member by construction.
            (0 | 1, 1..) => {
                let reps = cl_spectrum_slice(&t, &sampling::unit_imaginary(rng, n))?;
                reps[rng.random_range(0..reps.len())].clone()
            }
            (0 | 1, 0) => match spectrum.eigenvalues.iter().find(|z| z.im == 0.0) {
                Some(z) => Paravector::real(0, z.re),
                None => sampling::paravector(rng, 0, 2.0),
            },
            _ => sampling::paravector(rng, n, 2.0),
        };
        let direct = cl_spectrum_membership(&t, &k).member;
        let via_eigs = spectral_intersection_membership(&spectrum, &k, DEFAULT_INTERSECTION_TOL);
        count += usize::from(direct != via_eigs);
        found += usize::from(direct);
    }
    disagree.push(count as f64);
    members.push(found as f64);
    Ok(report("op-spectra", opts, vec![disagree, members, pairing]))
}

fn flat(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut stem = Tracker::at_most("flat residual for stem F", 1e-9);
    for case in 0..10 {
        let (d, n) = (1 + case % 3, case % 3);
        let t = sampling::operator(rng, d, n, 0.3);
        let f = dsl_function(rng, n, &ExprOptions::default())?;
        stem.push(flat_residual(&riesz_dunford_matrix(&f, &t, None, &opts.policy, &opts.quadrature)?));
    }
    let mut witness = Tracker::at_least("flat residual for a non-stem F", 1e-3);
    let t = sampling::operator(rng, 2, 2, 0.3);
    let (_, f) = sampling::non_stem_functions(2).swap_remove(1);
    witness.push(flat_residual(&riesz_dunford_matrix(&f, &t, None, &opts.policy, &opts.quadrature)?));
    Ok(report("flat", opts, vec![stem, witness]))
}

fn equivalence(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut diff = Tracker::at_most("slice calculus vs Riesz-Dunford (Frobenius)", 1e-6);
    for case in 0..20 {
        let (d, n) = (1 + case % 3, 1 + case % 2);
        let t = sampling::operator(rng, d, n, 0.4);
        let coeffs = sampling::polynomial_coeffs(rng, n, 3, 1.0);
        let f = from_expr(&sampling::polynomial_expr(&coeffs), n)?;
        let unit = sampling::unit_imaginary(rng, n);
        let rd = riesz_dunford_matrix(&f, &t, None, &opts.policy, &opts.quadrature)?;
        let sl = slice_calculus_matrix(&f, &t, &unit, None, &opts.policy, &opts.quadrature)?;
        diff.push(frobenius(&(rd - sl)));
    }
    Ok(report("equivalence", opts, vec![diff]))
}

fn spectral_mapping(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut dist = Tracker::at_most("Hausdorff distance f(sigma(T)) vs sigma(f(T))", 1e-6);
    for case in 0..20 {
        let (d, n) = (1 + case % 3, case % 3);
        if d << n > DEFAULT_SIZE_CAP {
            continue;
        }
        let t = sampling::operator(rng, d, n, 0.5);
        let degree = rng.random_range(1..=3);
        let f = from_expr(&sampling::scalar_polynomial_expr(rng, degree, 1.0), n)?;
        dist.push(spectral_mapping_check(&f, &t, &opts.policy, &opts.quadrature)?);
    }
    Ok(report("spectral-mapping", opts, vec![dist]))
}

fn lift(rng: &mut ChaCha8Rng, opts: &SuiteOptions) -> Result<SuiteReport> {
    let mut lifted = Tracker::at_most("lift of the slice restriction reproduces F", 1e-10);
    for case in 0..10 {
        let n = 1 + case % 4;
        let f = dsl_function(rng, n, &ExprOptions::default())?;
        let s = sampling::unit_imaginary(rng, n);
        let g = slice_lift(slice_restriction(&f, &s), &s, f.domain().clone())?;
        for _ in 0..10 {
            let z = sampling::complex_point(rng, 2.5);
            lifted.push(rel(&g.eval(z)?, &f.eval(z)?));
        }
    }
    Ok(report("lift", opts, vec![lifted]))
}
