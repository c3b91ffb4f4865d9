//! Cross-method agreement, function identities and precision behavior.

use etatheta::arb::ArbComplex;
use etatheta::evaluator::{
    benchmark_tau, eval, eval_naive_oracle, reduce_tau, EvalReport, EvalRequest, Function, Input,
    Method,
};
use etatheta::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

/// A random point of the fundamental domain with imaginary part below 2.5.
fn random_tau(rng: &mut ChaCha8Rng, prec: u32) -> ArbComplex {
    loop {
        let x: f64 = rng.gen_range(-0.5..=0.5);
        let y: f64 = rng.gen_range(0.8..2.5);
        if x * x + y * y >= 1.0 {
            return ArbComplex::from_f64(x, y, prec);
        }
    }
}

fn run(f: Function, tau: &ArbComplex, p: u32, m: Method) -> EvalReport {
    eval(&EvalRequest::new(f, Input::Tau(tau.clone()), p, m)).unwrap()
}

#[test]
fn methods_agree_with_each_other_and_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for p in [64u32, 256, 1024] {
        for _ in 0..6 {
            let tau = random_tau(&mut rng, p + 64);
            for f in [
                Function::Eta,
                Function::Theta0,
                Function::Theta1,
                Function::Theta2,
                Function::ThetaAll,
            ] {
                let naive = eval_naive_oracle(&EvalRequest::new(
                    f,
                    Input::Tau(tau.clone()),
                    p,
                    Method::Optimized,
                ))
                .unwrap();
                for m in [Method::Classical, Method::Optimized, Method::Bsgs] {
                    let r = run(f, &tau, p, m);
                    for (name, v) in &r.values {
                        let (_, w) = naive.iter().find(|(n, _)| n == name).unwrap();
                        let d = v.log2_dist(w);
                        assert!(d < -(p as f64) + 16.0, "{f} {m} {name} p={p}: {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn eta_theta_identities() {
    let p = 256;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let tau = random_tau(&mut rng, p + 64);
        let eta = run(Function::Eta, &tau, p, Method::Optimized).values[0]
            .1
            .clone();
        let th = run(Function::ThetaAll, &tau, p, Method::Optimized);
        let (t0, t1, t2) = (
            th.value("theta0").unwrap(),
            th.value("theta1").unwrap(),
            th.value("theta2").unwrap(),
        );
        let wp = p + 32;
        let lhs = eta.mul_plain(&eta, wp).mul_plain(&eta, wp).mul_2exp(1);
        let rhs = t0.mul_plain(t1, wp).mul_plain(t2, wp);
        assert!(lhs.log2_dist(&rhs) < -(p as f64) + 24.0);
        let fourth = |z: &ArbComplex| {
            let s = z.mul_plain(z, wp);
            s.mul_plain(&s, wp)
        };
        let jacobi = fourth(t1).add(&fourth(t2), wp);
        assert!(fourth(t0).log2_dist(&jacobi) < -(p as f64) + 24.0);
    }
}

#[test]
fn precision_trick_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for p in [64u32, 512] {
        let tau = random_tau(&mut rng, p + 64);
        for f in [Function::Eta, Function::ThetaAll] {
            for m in [Method::Optimized, Method::Bsgs] {
                let mut req = EvalRequest::new(f, Input::Tau(tau.clone()), p, m);
                let a = eval(&req).unwrap();
                req.precision_trick = false;
                let b = eval(&req).unwrap();
                for ((_, x), (_, y)) in a.values.iter().zip(&b.values) {
                    assert!(x.log2_dist(y) < -(p as f64) + 16.0);
                }
            }
        }
    }
}

#[test]
fn error_bound_at_benchmark_point() {
    let (tau, _) = reduce_tau(&benchmark_tau(2000)).unwrap();
    for p in [128u32, 1000] {
        for f in [Function::Eta, Function::Theta0] {
            let a = run(f, &tau, p, Method::Optimized);
            let b = run(f, &tau, p + 64, Method::Optimized);
            assert!(a.values[0].1.log2_dist(&b.values[0].1) < -(p as f64));
        }
    }
}

#[test]
fn counts_match_sequence() {
    // T = 1000 at the benchmark point: ~52 eta terms
    let (tau, _) = reduce_tau(&benchmark_tau(200)).unwrap();
    let r = run(Function::Eta, &tau, 10_000, Method::Optimized);
    let seq = etatheta::addseq::build_optimized(etatheta::ExponentKind::Pentagonal, r.n).unwrap();
    let (mul, sqr) = seq.counts().complex_ops();
    assert_eq!((r.counts.complex_mul, r.counts.complex_sqr), (mul, sqr));
    assert!(
        (r.modeled_cost(etatheta::addseq::CostModel::FFT)
            - seq.cost(etatheta::addseq::CostModel::FFT))
        .abs()
            < 1e-9
    );
}

#[test]
fn raw_q_matches_tau() {
    let p = 200;
    let tau = ArbComplex::parse("0.125", "1.1", p + 64).unwrap();
    let by_tau = run(Function::Theta2, &tau, p, Method::Optimized);
    let gamma = ArbComplex {
        re: -Float::with_val(p + 64, &tau.im * etatheta::arb::pi(p + 64)),
        im: Float::with_val(p + 64, &tau.re * etatheta::arb::pi(p + 64)),
    };
    let q = gamma.exp(p + 64);
    let by_q = eval(&EvalRequest::new(
        Function::Theta2,
        Input::Q(q),
        p,
        Method::Bsgs,
    ))
    .unwrap();
    assert!(by_tau.values[0].1.log2_dist(&by_q.values[0].1) < -(p as f64) + 16.0);
}

#[test]
fn invalid_inputs() {
    let tau = ArbComplex::from_f64(0.0, -1.0, 64);
    assert_eq!(
        eval(&EvalRequest::new(
            Function::Eta,
            Input::Tau(tau),
            64,
            Method::Auto
        ))
        .unwrap_err(),
        Error::NotUpperHalfPlane
    );
    // |q| > 1 - 2^-64 cannot be certified at 128 bits
    let q = ArbComplex::parse("0.99999999999999999999999", "0", 256).unwrap();
    assert_eq!(
        eval(&EvalRequest::new(
            Function::Eta,
            Input::Q(q),
            128,
            Method::Auto
        ))
        .unwrap_err(),
        Error::QTooLarge(128)
    );
    let q = ArbComplex::from_f64(0.0, 1.5, 128);
    assert_eq!(
        eval(&EvalRequest::new(
            Function::Theta0,
            Input::Q(q),
            128,
            Method::Auto
        ))
        .unwrap_err(),
        Error::QTooLarge(128)
    );
    let tau = ArbComplex::from_f64(0.0, 1.0, 64);
    assert_eq!(
        eval(&EvalRequest::new(
            Function::Eta,
            Input::Tau(tau),
            4,
            Method::Auto
        ))
        .unwrap_err(),
        Error::PrecisionUnderflow(4)
    );
}

#[test]
fn auto_switches_at_crossover() {
    let tau = ArbComplex::from_f64(0.0, 1.0, 64);
    let mut req = EvalRequest::new(Function::Eta, Input::Tau(tau), 200, Method::Auto);
    assert_eq!(eval(&req).unwrap().method, Method::Optimized);
    req.crossover = 10;
    let r = eval(&req).unwrap();
    assert_eq!(r.method, Method::Bsgs);
    assert!(r.m().is_some());
}
