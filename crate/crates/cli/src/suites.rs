//! Randomized invariant suites behind `verify` and `fibre`.
//!
//! Sample `i` draws from its own stream `rng(seed, i)`, and per-check
//! results are reduced with max/min, so reports do not depend on the
//! number of worker threads.

use hilbert_ortho::sample::{self, rng};
use hilbert_ortho::sphere::f1_denominator;
use hilbert_ortho::{
    chart_forward, chart_inverse, contract_path, e_act, e_compose, e_inverse, embed,
    frechet_transition, householder_decompose, is_stable_o_member, op_distance, project_lambda,
    reconstruct, reflection_flipping, reflection_spanning, same_coset, section_h0,
    shift_apply, stabilizer_membership, transition, trivialize, untrivialize, ChartPole,
    EuclidElement, GOperator, ProjectionSpec, SparseVector, SpherePoint, TrivializationResult,
};
use rand::{Rng, RngCore};
use rayon::prelude::*;
use rayon::ThreadPool;

use crate::report::{Bound, Check};

pub const SUITES: [&str; 9] = [
    "reflections",
    "group",
    "normality",
    "euclid",
    "charts",
    "frechet",
    "homotopy",
    "quotient",
    "fibre",
];

struct Spec {
    name: &'static str,
    bound: Bound,
    threshold: f64,
}

const fn at_most(name: &'static str, threshold: f64) -> Spec {
    Spec { name, bound: Bound::Ceiling, threshold }
}

const fn at_least(name: &'static str, threshold: f64) -> Spec {
    Spec { name, bound: Bound::Floor, threshold }
}

/// Runs `f` once per sample and reduces each output slot by its bound.
fn sweep<F>(pool: &ThreadPool, samples: usize, seed: u64, specs: &[Spec], f: F) -> Vec<Check>
where
    F: Fn(usize, &mut dyn RngCore) -> Vec<f64> + Sync,
{
    let start: Vec<f64> = specs.iter().map(|s| s.bound.start()).collect();
    let merge = |a: Vec<f64>, b: Vec<f64>| -> Vec<f64> {
        specs.iter().zip(a.iter().zip(&b)).map(|(s, (&x, &y))| s.bound.combine(x, y)).collect()
    };
    let worst = pool.install(|| {
        (0..samples)
            .into_par_iter()
            .map(|i| {
                let out = f(i, &mut rng(seed, i as u64));
                assert_eq!(out.len(), specs.len(), "sample produced the wrong number of residuals");
                out
            })
            .reduce(|| start.clone(), merge)
    });
    specs
        .iter()
        .zip(worst)
        .map(|(s, w)| Check::new(s.name, s.bound, w, s.threshold))
        .collect()
}

fn flag(condition: bool) -> f64 {
    if condition {
        0.0
    } else {
        1.0
    }
}

fn probes(rng: &mut dyn RngCore, dim: usize, count: usize) -> Vec<SparseVector> {
    (0..count).map(|_| sample::random_vector(rng, dim, dim.min(8))).collect()
}

/// Largest `‖A x − B x‖` over the probes.
fn pointwise(a: &GOperator, b: &GOperator, xs: &[SparseVector]) -> f64 {
    xs.iter().map(|x| a.apply(x).distance(&b.apply(x))).fold(0.0, f64::max)
}

/// `None` for an unknown suite name.
pub fn run(suite: &str, samples: usize, seed: u64, pool: &ThreadPool) -> Option<Vec<Check>> {
    let checks = match suite {
        "reflections" => reflections(pool, samples, seed),
        "group" => group(pool, samples, seed),
        "normality" => normality(pool, samples, seed),
        "euclid" => euclid(pool, samples, seed),
        "charts" => charts(pool, samples, seed),
        "frechet" => frechet(pool, samples, seed),
        "homotopy" => homotopy(pool, samples, seed),
        "quotient" => quotient(pool, samples, seed),
        "fibre" => sweep(pool, samples, seed, &FIBRE, |i, r| fibre_sample(1 + i % 3, r)),
        _ => return None,
    };
    Some(checks)
}

fn reflections(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 6] = [
        at_most("involution", 1e-9),
        at_most("self_adjoint", 1e-9),
        at_most("norm_preservation", 1e-9),
        at_most("projection_idempotent", 1e-9),
        at_most("decompose_round_trip", 1e-8),
        at_most("word_length_excess", 0.0),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let l = sample::random_reflection(r, 32);
        let xs = probes(r, 40, 3);
        let isometry = xs.iter().map(|x| (l.apply(x).norm() - x.norm()).abs()).fold(0.0, f64::max);
        let size = r.random_range(0..=4);
        let projection = ProjectionSpec::new(sample::random_family(r, 32, size));
        let idempotent = xs
            .iter()
            .map(|x| {
                let once = projection.apply(x);
                projection.apply(&once).distance(&once)
            })
            .fold(0.0, f64::max);
        let n = r.random_range(2..=8);
        let m = sample::random_dense_orthogonal(r, n);
        let word = householder_decompose(&m);
        vec![
            op_distance(&l.compose(&l), &GOperator::identity()),
            op_distance(&l, &l.adjoint_inverse()),
            isometry,
            idempotent,
            reconstruct(&word).matrix().sub(m.matrix()).max_abs(),
            word.len().saturating_sub(n) as f64,
        ]
    })
}

fn group(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 5] = [
        at_most("associativity", 1e-9),
        at_most("inverse", 1e-9),
        at_most("homomorphism", 1e-9),
        at_most("adjoint_is_inverse", 1e-9),
        at_most("stable_membership", 0.0),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let (a, b, c) = (sample::random_operator(r, 8), sample::random_operator(r, 8), sample::random_operator(r, 8));
        let xs = probes(r, 12, 3);
        let homomorphism = xs
            .iter()
            .map(|x| a.compose(&b).apply(x).distance(&a.apply(&b.apply(x))))
            .fold(0.0, f64::max);
        let adjoint = xs
            .iter()
            .zip(probes(r, 12, 3))
            .map(|(x, y)| (a.apply(x).inner(&y) - x.inner(&a.adjoint_inverse().apply(&y))).abs())
            .fold(0.0, f64::max);
        let n = r.random_range(1..=8);
        let stable = is_stable_o_member(&embed(&sample::random_dense_orthogonal(r, n)))
            && !is_stable_o_member(&GOperator::negative_identity());
        vec![
            op_distance(&a.compose(&b).compose(&c), &a.compose(&b.compose(&c))),
            op_distance(&a.compose(&a.adjoint_inverse()), &GOperator::identity()),
            homomorphism,
            adjoint,
            flag(stable),
        ]
    })
}

fn random_euclid(r: &mut dyn RngCore, dim: usize) -> EuclidElement {
    let nnz = r.random_range(0..=dim);
    EuclidElement::new(sample::random_vector(r, dim, nnz), sample::random_operator(r, dim))
}

fn random_xi(r: &mut dyn RngCore, dim: usize) -> EuclidElement {
    let (len, nnz) = (r.random_range(0..=4), r.random_range(0..=dim));
    EuclidElement::from_word(sample::random_vector(r, dim, nnz), sample::random_word(r, dim, len))
}

fn normality(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 4] = [
        at_most("reflection_conjugation", 1e-8),
        at_most("witness_matches_triple_product", 1e-8),
        at_most("witness_word_length_change", 0.0),
        at_most("witness_factor_reflection_triple", 1e-9),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let x = sample::random_operator(r, 10);
        let size = r.random_range(0..=4);
        let family = sample::random_family(r, 10, size);
        let transported = hilbert_ortho::conjugate_reflection(&x, &family);
        let xt = x.adjoint_inverse();
        let xs = probes(r, 14, 4);
        let spanning = xt.compose(&reflection_spanning(&family)).compose(&x);
        let flipping = xt.compose(&reflection_flipping(&family)).compose(&x);
        let conjugation = op_distance(&spanning, &reflection_spanning(&transported))
            .max(op_distance(&flipping, &reflection_flipping(&transported)))
            .max(pointwise(&spanning, &reflection_spanning(&transported), &xs));

        let (g, a) = (random_euclid(r, 7), random_xi(r, 7));
        let witness = hilbert_ortho::xi_conjugation_witness(&g, &a).expect("a carries a word");
        let direct = e_compose(&e_inverse(&g), &e_compose(&a, &g));
        let matches = xs
            .iter()
            .map(|v| e_act(&witness, v).distance(&e_act(&direct, v)))
            .fold(witness.distance(&direct), f64::max);
        let (before, after) = (a.word.as_ref().map_or(0, |w| w.len()), witness.word.as_ref().map_or(0, |w| w.len()));
        let triple = witness
            .word
            .iter()
            .flat_map(|w| w.factors())
            .map(|f| {
                let l = f.to_operator();
                op_distance(&l.compose(&l), &GOperator::identity()).max(op_distance(&l, &l.adjoint_inverse()))
            })
            .fold(0.0, f64::max);
        vec![conjugation, matches, before.abs_diff(after) as f64, triple]
    })
}

fn euclid(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 5] = [
        at_most("associativity", 1e-8),
        at_most("identity", 1e-9),
        at_most("inverse", 1e-9),
        at_most("action_homomorphism", 1e-9),
        at_most("isometry", 1e-9),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let (f, g, h) = (random_euclid(r, 8), random_euclid(r, 8), random_euclid(r, 8));
        let id = EuclidElement::identity();
        let (x, y) = (sample::random_vector(r, 12, 6), sample::random_vector(r, 12, 6));
        vec![
            e_compose(&e_compose(&f, &g), &h).distance(&e_compose(&f, &e_compose(&g, &h))),
            e_compose(&f, &id).distance(&f).max(e_compose(&id, &f).distance(&f)),
            e_compose(&f, &e_inverse(&f)).distance(&id).max(e_compose(&e_inverse(&f), &f).distance(&id)),
            e_act(&e_compose(&g, &h), &x).distance(&e_act(&g, &e_act(&h, &x))),
            (e_act(&f, &x).distance(&e_act(&f, &y)) - x.distance(&y)).abs(),
        ]
    })
}

/// A random point with `⟨x, e_p⟩ ≥ margin`.
fn hemisphere_point(r: &mut dyn RngCore, pole: ChartPole, dim: usize, margin: f64) -> SpherePoint {
    loop {
        let x = sample::random_unit_vector(r, dim);
        let c = x.vector().get(pole.0);
        if c.abs() >= margin {
            return if c > 0.0 { x } else { SpherePoint::new(-x.vector()).expect("negation keeps unit norm") };
        }
    }
}

/// A random chart coordinate with zero `pole` component and norm below `radius`.
fn disc_point(r: &mut dyn RngCore, pole: ChartPole, dim: usize, radius: f64) -> SparseVector {
    let v = sample::random_vector(r, dim, dim.min(6)).map_values(|i, c| if i == pole.0 { 0.0 } else { c });
    let len = v.norm();
    if len == 0.0 {
        return v;
    }
    v.scale(r.random_range(0.0..radius) / len)
}

fn charts(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 3] = [
        at_most("round_trip", 1e-10),
        at_most("dual_round_trip", 1e-10),
        at_most("same_chart_transition", 1e-12),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let pole = ChartPole(r.random_range(0..6));
        let x = hemisphere_point(r, pole, 10, 1e-3);
        let back = chart_inverse(pole, &chart_forward(pole, &x).expect("x is in the hemisphere"))
            .expect("chart image lies in the disc");
        let y = disc_point(r, pole, 10, 0.99);
        let lifted = chart_inverse(pole, &y).expect("y is in the disc");
        let again = chart_forward(pole, &lifted).expect("lift is in the hemisphere");
        let same = transition(pole, pole, &y).expect("same chart").distance(&y);
        vec![back.distance(&x), again.distance(&y), same]
    })
}

fn frechet(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 1] = [at_most("central_difference_relative_error", 1e-6)];
    const STEP: f64 = 1e-6;
    sweep(pool, samples, seed, &SPECS, |_, r| loop {
        let (to, from) = (ChartPole(r.random_range(0..5)), ChartPole(r.random_range(0..5)));
        let y = disc_point(r, from, 10, 0.8);
        let h = disc_point(r, from, 10, 1.0);
        let lifted = chart_inverse(from, &y).expect("y is in the disc");
        if lifted.vector().get(to.0) <= 0.1 || h.is_zero() {
            continue;
        }
        let analytic = frechet_transition(to, from, &y, &h).expect("y is in the overlap");
        let plus = transition(to, from, &y.axpy(STEP, &h)).expect("step stays in the overlap");
        let minus = transition(to, from, &y.axpy(-STEP, &h)).expect("step stays in the overlap");
        let central = (&plus - &minus).scale(0.5 / STEP);
        break vec![central.distance(&analytic) / analytic.norm().max(h.norm())];
    })
}

fn homotopy(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 5] = [
        at_most("unit_norm", 1e-9),
        at_most("start_point", 1e-10),
        at_most("end_point", 1e-10),
        at_least("f1_denominator", 0.1),
        at_most("shift_isometry", 0.0),
    ];
    sweep(pool, samples, seed, &SPECS, |_, r| {
        let x = sample::random_unit_vector(r, 12);
        let path = contract_path(&x, 1000).expect("1000 steps is a valid path");
        let denominator = (0..100)
            .map(|_| f1_denominator(r.random_range(0.0..=1.0), &x))
            .fold(f64::INFINITY, f64::min);
        let shifted = shift_apply(1, x.vector());
        let shift = (shifted.norm() - x.vector().norm()).abs() + shifted.get(0).abs();
        vec![
            path.max_norm_defect(),
            path.samples[0].point.distance(&x),
            path.samples[path.samples.len() - 1].point.distance(&SpherePoint::basis(0)),
            denominator,
            shift,
        ]
    })
}

fn quotient(pool: &ThreadPool, samples: usize, seed: u64) -> Vec<Check> {
    const SPECS: [Spec; 4] = [
        at_most("section_property", 1e-9),
        at_most("coset_biconditional", 0.0),
        at_most("metric_bound_excess", 1e-9),
        at_most("section_lipschitz_ratio", 10.0),
    ];
    sweep(pool, samples, seed, &SPECS, |i, r| {
        let x = if i % 5 == 0 {
            let eps = 10f64.powi(-r.random_range(2..12));
            let v = &SparseVector::basis(0).scale(-1.0) + &sample::random_vector(r, 8, 4).scale(eps);
            SpherePoint::normalize(&v).expect("perturbation is small")
        } else {
            sample::random_unit_vector(r, 12)
        };
        let section = project_lambda(&section_h0(&x)).distance(&x);

        let a = sample::random_operator(r, 8);
        let b = if i % 2 == 0 {
            let f = sample::random_operator(r, 8);
            a.compose(&section_h0(&project_lambda(&f)).adjoint_inverse().compose(&f))
        } else {
            sample::random_operator(r, 8)
        };
        let biconditional = same_coset(&a, &b) == stabilizer_membership(1, &a.adjoint_inverse().compose(&b));
        let excess = project_lambda(&a).distance(&project_lambda(&b)) - op_distance(&a, &b);

        // Stay away from the antipode, where the section changes formula.
        let base = hemisphere_point(r, ChartPole(0), 8, 0.5);
        let nudged = base.vector().axpy(1e-4, sample::random_unit_vector(r, 8).vector());
        let near = SpherePoint::normalize(&nudged).expect("nudge is small");
        let ratio = op_distance(&section_h0(&base), &section_h0(&near)) / base.distance(&near);

        vec![section, flag(biconditional), excess, ratio]
    })
}

const FIBRE: [Spec; 4] = [
    at_most("round_trip", 1e-8),
    at_most("commuting_diagram", 1e-9),
    at_most("fibre_orthogonal", 1e-9),
    at_most("fibre_isometry", 1e-8),
];

fn fibre_sample(j: usize, r: &mut dyn RngCore) -> Vec<f64> {
    let a = sample::random_dense_orthogonal(r, j + 1);
    let t = trivialize(j, &a).expect("sample has the right size");
    let back = untrivialize(j, &t).expect("trivialization output is valid");
    let again = trivialize(j, &back).expect("round trip output is valid");
    let round_trip = back
        .matrix()
        .sub(a.matrix())
        .max_abs()
        .max(again.base.distance(&t.base))
        .max(again.fibre.matrix().sub(t.fibre.matrix()).max_abs());

    let other = TrivializationResult { base: t.base.clone(), fibre: sample::random_dense_orthogonal(r, j) };
    let b = untrivialize(j, &other).expect("random fibre is valid");
    let total = a.matrix().sub(b.matrix()).spectral_norm();
    let fibre = t.fibre.matrix().sub(other.fibre.matrix()).spectral_norm();

    vec![
        round_trip,
        t.base.distance(&project_lambda(&embed(&a))),
        t.fibre.matrix().orthogonality_residual(),
        (total - fibre).abs(),
    ]
}

/// The `fibre` command: round trips at a single sphere dimension `j`.
pub fn fibre(j: usize, samples: usize, seed: u64, pool: &ThreadPool) -> Vec<Check> {
    sweep(pool, samples, seed, &FIBRE, |_, r| fibre_sample(j, r))
}
