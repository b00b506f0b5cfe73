use fastsum::dataset::{generate_particles, BoxDomain, DatasetSpec, WeightMode};
use fastsum::fmm::*;
use fastsum::{Complex64, Executor, Particle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / scale
}

fn random_me(rng: &mut ChaCha8Rng, center: Complex64, p: usize) -> MultipoleExpansion {
    let coeffs = (0..p)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    MultipoleExpansion::new(center, coeffs).unwrap()
}

fn random_offset(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

fn cloud(n: usize, seed: u64, weight_mode: WeightMode) -> Vec<Particle> {
    let spec = DatasetSpec {
        count: n,
        dimension: 2,
        seed,
        weight_mode,
    };
    generate_particles(&spec, &BoxDomain::unit(2)).unwrap()
}

#[test]
fn translation_depends_only_on_the_offset() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let shift = Complex64::new(rng.gen_range(-8.0f64..8.0).round(), rng.gen_range(-8.0f64..8.0).round());
        let me = random_me(&mut rng, Complex64::new(0.25, -0.5), 12);
        let off = random_offset(&mut rng, 1.0, 3.0) * 1024.0;
        let lc = me.center + Complex64::new(off.re.round(), off.im.round()) / 1024.0;
        let moved = MultipoleExpansion::new(me.center + shift, me.coeffs.clone()).unwrap();
        for tr in [Traversal::Row, Traversal::Diagonal] {
            let a = m2l_translate(&me, lc, tr).unwrap();
            // dyadic centers and shifts keep the offset exact
            let b = m2l_translate(&moved, lc + shift, tr).unwrap();
            assert_eq!(a.coeffs, b.coeffs);
        }
    }
}

#[test]
fn traversals_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for p in [8, 12, 16] {
        for _ in 0..100 {
            let me = random_me(&mut rng, Complex64::new(0.0, 0.0), p);
            let lc = random_offset(&mut rng, 2.0, 6.0);
            let a = m2l_translate(&me, lc, Traversal::Row).unwrap();
            let b = m2l_translate(&me, lc, Traversal::Diagonal).unwrap();
            for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
                assert!((x - y).norm() <= 1e-12 * x.norm().max(y.norm()));
            }
        }
    }
}

#[test]
fn translation_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let c = Complex64::new(0.1, 0.2);
        let m1 = random_me(&mut rng, c, 12);
        let m2 = random_me(&mut rng, c, 12);
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mix = MultipoleExpansion::new(
            c,
            m1.coeffs.iter().zip(&m2.coeffs).map(|(x, y)| x * a + y * b).collect(),
        )
        .unwrap();
        let lc = c + random_offset(&mut rng, 2.0, 4.0);
        let l1 = m2l_translate(&m1, lc, Traversal::Row).unwrap();
        let l2 = m2l_translate(&m2, lc, Traversal::Row).unwrap();
        let lm = m2l_translate(&mix, lc, Traversal::Row).unwrap();
        let want: Vec<Complex64> = l1.coeffs.iter().zip(&l2.coeffs).map(|(x, y)| x * a + y * b).collect();
        let scale: f64 = l1.coeffs.iter().chain(&l2.coeffs).map(|z| z.norm()).fold(0.0, f64::max) * (a.abs() + b.abs());
        for (x, y) in lm.coeffs.iter().zip(&want) {
            assert!((x - y).norm() <= 1e-12 * scale);
        }
    }
}

#[test]
fn single_source_within_geometric_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for p in [8, 12, 20] {
        for _ in 0..100 {
            let c_m = Complex64::new(0.0, 0.0);
            let c_l = random_offset(&mut rng, 1.0, 1.0 + 1e-9);
            let zs = c_m + random_offset(&mut rng, 0.0, 0.25);
            let z = c_l + random_offset(&mut rng, 0.0, 0.25);
            let me = p2m(&[Particle::new(zs.re, zs.im, 1.0)], c_m, p);
            let le = m2l_translate(&me, c_l, Traversal::Row).unwrap();
            let exact = 1.0 / (z - zs);
            let got = l2p(&le, z);
            // the two expansions converge jointly with ratio
            // (|zs - c_M| + |z - c_L|) / |c_L - c_M|
            let rho = ((zs - c_m).norm() + (z - c_l).norm()) / (c_l - c_m).norm();
            let bound = rho.powi(p as i32) / (1.0 - rho) / (c_l - c_m).norm();
            assert!((got - exact).norm() <= bound + 1e-12, "p={p} rho={rho}");
        }
    }
}

#[test]
fn local_expansion_of_a_monopole() {
    let me = p2m(&[Particle::new(0.0, 0.0, 1.0)], Complex64::new(0.0, 0.0), 16);
    let t = Complex64::new(2.0, 0.0);
    let le = m2l_translate(&me, t, Traversal::Diagonal).unwrap();
    for z in [Complex64::new(2.3, 0.1), Complex64::new(1.6, -0.4)] {
        let ratio = (z - t).norm() / t.norm();
        let tail = ratio.powi(16) / (1.0 - ratio) / t.norm();
        assert!((l2p(&le, z) - 1.0 / z).norm() <= tail + 1e-15);
    }
}

#[test]
fn scaling_covariance() {
    let pts = cloud(400, 11, WeightMode::Signed);
    let exec = Executor::sequential();
    let base = fmm_evaluate(&pts, &FmmConfig::new(10, 3), &exec).unwrap();
    for s in [0.5, 3.0] {
        let scaled: Vec<Particle> = pts
            .iter()
            .map(|q| Particle::new(q.position.re * s, q.position.im * s, q.weight))
            .collect();
        let config = FmmConfig {
            domain: Square::new(0.0, 0.0, s).unwrap(),
            ..FmmConfig::new(10, 3)
        };
        let out = fmm_evaluate(&scaled, &config, &exec).unwrap();
        let want: Vec<Complex64> = base.field.iter().map(|f| f / s).collect();
        assert!(rel_diff(&out.field, &want) <= 1e-10);
    }
    // the expansion coefficients scale the same way
    let c = Complex64::new(0.5, 0.5);
    let me = p2m(&pts[..20], c, 8);
    let sp: Vec<Particle> = pts[..20].iter().map(|q| Particle::new(q.position.re * 2.0, q.position.im * 2.0, q.weight)).collect();
    let me2 = p2m(&sp, c * 2.0, 8);
    for (k, (a, b)) in me.coeffs.iter().zip(&me2.coeffs).enumerate() {
        assert!((a * 2f64.powi(k as i32) - b).norm() <= 1e-12 * b.norm().max(1.0));
    }
}

#[test]
fn error_non_increasing_in_p() {
    let pts = cloud(1500, 5, WeightMode::Uniform01);
    let exec = Executor::new(2).unwrap();
    let reference = direct_field(&pts, &exec);
    let mut last = f64::INFINITY;
    for p in [4, 8, 12, 16] {
        let out = fmm_evaluate(&pts, &FmmConfig::new(p, 3), &exec).unwrap();
        let err = max_relative_error(&out.field, &reference).unwrap();
        assert!(err <= last, "p={p}: {err} > {last}");
        last = err;
    }
}

#[test]
fn batch_of_one_pair_is_a_single_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let plan = TranslationPlan::from_lists(vec![InteractionList {
        target: 0,
        center: Complex64::new(0.0625, 0.0625),
        sources: vec![5],
    }])
    .unwrap();
    let mut exps = vec![None; 64];
    let me = random_me(&mut rng, Complex64::new(0.6875, 0.0625), 12);
    exps[5] = Some(me.clone());
    let out = m2l_batch(&plan, &exps, 12, Traversal::Row, &Executor::sequential()).unwrap();
    let single = m2l_translate(&me, Complex64::new(0.0625, 0.0625), Traversal::Row).unwrap();
    assert_eq!(out.get(0).unwrap(), &single);
    assert_eq!(out.counters.arithmetic_ops, ops::m2l_ops_per_translation(12));
}

fn synthetic_batch(p: usize, count: usize, seed: u64) -> (TranslationPlan, Vec<Option<MultipoleExpansion>>) {
    let level = level_for_translations(count);
    let domain = Square::unit();
    let plan = idealized_plan(level, &domain, count).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = 1usize << level;
    let w = 1.0 / side as f64;
    let exps = (0..side * side)
        .map(|b| {
            let c = Complex64::new(((b % side) as f64 + 0.5) * w, ((b / side) as f64 + 0.5) * w);
            Some(random_me(&mut rng, c, p))
        })
        .collect();
    (plan, exps)
}

#[test]
fn batch_is_deterministic_and_counted() {
    for p in [8, 16] {
        let (plan, exps) = synthetic_batch(p, 9072, 7);
        let one = m2l_batch(&plan, &exps, p, Traversal::Row, &Executor::new(1).unwrap()).unwrap();
        let four = m2l_batch(&plan, &exps, p, Traversal::Row, &Executor::with_chunk_bytes(4, 1024).unwrap()).unwrap();
        assert_eq!(one.locals, four.locals);
        assert_eq!(one.counters.arithmetic_ops, 9072 * ops::m2l_ops_per_translation(p));
        assert_eq!(one.counters.bytes_read, 9072 * ops::m2l_bytes_read_per_translation(p, 8));
        assert_eq!(
            one.counters.bytes_written,
            plan.num_targets() as u64 * ops::m2l_bytes_written_per_target(p, 8)
        );
    }
}

#[test]
fn batch_is_linear_in_each_source() {
    let p = 8;
    let (plan, exps) = synthetic_batch(p, 2160, 8);
    let exec = Executor::sequential();
    let base = m2l_batch(&plan, &exps, p, Traversal::Row, &exec).unwrap();
    let mut doubled = exps.clone();
    let victim = plan.lists()[0].sources[0];
    let me = doubled[victim].as_mut().unwrap();
    for c in me.coeffs.iter_mut() {
        *c *= 2.0;
    }
    let only = m2l_translate(exps[victim].as_ref().unwrap(), plan.lists()[0].center, Traversal::Row).unwrap();
    let out = m2l_batch(&plan, &doubled, p, Traversal::Row, &exec).unwrap();
    let target = plan.lists()[0].target;
    let a = base.get(target).unwrap();
    let b = out.get(target).unwrap();
    for ((x, y), z) in a.coeffs.iter().zip(&b.coeffs).zip(&only.coeffs) {
        assert!((y - x - z).norm() <= 1e-12 * (x.norm() + z.norm()));
    }
}

#[test]
fn single_precision_batch_runs() {
    let (plan, exps) = synthetic_batch(8, 2160, 9);
    let lo: Vec<Option<MultipoleExpansion<f32>>> = exps
        .iter()
        .map(|m| {
            m.as_ref().map(|m| MultipoleExpansion {
                center: fastsum::real::cast_complex(m.center),
                coeffs: m.coeffs.iter().map(|c| fastsum::real::cast_complex(*c)).collect(),
            })
        })
        .collect();
    let out = m2l_batch(&plan, &lo, 8, Traversal::Diagonal, &Executor::sequential()).unwrap();
    assert_eq!(out.counters.bytes_read, 2160 * ops::m2l_bytes_read_per_translation(8, 4));
    let hi = m2l_batch(&plan, &exps, 8, Traversal::Diagonal, &Executor::sequential()).unwrap();
    for ((_, a), (_, b)) in out.locals.iter().zip(&hi.locals) {
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            let x = fastsum::real::cast_complex::<f32, f64>(*x);
            assert!((x - y).norm() <= 1e-4 * (1.0 + y.norm()));
        }
    }
}

#[test]
fn grid_rejects_outside_particles() {
    let pts = [Particle::new(0.5, 0.5, 1.0), Particle::new(1.5, 0.5, 1.0)];
    assert_eq!(
        build_grid(&pts, &FmmConfig::new(8, 2)),
        Err(fastsum::Error::OutOfDomain { index: 1 })
    );
    assert!(build_grid(&pts[..1], &FmmConfig::new(8, 1)).is_err());
    assert_eq!(build_grid(&pts[..1], &FmmConfig::new(8, 5)).unwrap().num_boxes(), 1024);
}
