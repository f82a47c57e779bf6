//! End-to-end checks, one line of output per check.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sonc_core::circuits::{enumerate_circuits, reznick_cone};
use sonc_core::discriminant::{
    boundary_sample, build_chart, cell_truncations_vanish, codim_probe, hk_sample, seeded_samples, verify_vanishing,
    ImplicitPolynomial,
};
use sonc_core::equality::{check_equality, complex_census, Verdict};
use sonc_core::expsum::{check_nonneg_numeric, MinimizeConfig, ToricPoint};
use sonc_core::fixtures;
use sonc_core::poly::nonneg_on_positive_halfline;
use sonc_core::rat::{int, ints, rat, Rat};
use sonc_core::subdivision::{enumerate_regular_subdivisions, subdivide, RegularSubdivision, WeightVector};
use sonc_core::univariate::{build_poset, codim1_count, enumerate_labels, quartic_boundary_test, slice_dim, QuarticVerdict};
use sonc_core::SupportSet;

type Check = std::result::Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn circuit_census() -> Check {
    let printed: [[i64; 6]; 4] =
        [[1, 1, 0, -4, 0, 2], [0, 0, 1, 0, -2, 1], [1, -3, 2, 0, 0, 0], [1, 0, 0, -3, 1, 1]];
    let a = fixtures::planar_six();
    let simplicial: Vec<_> = enumerate_circuits(&a)
        .into_iter()
        .filter(|c| c.simplicial && reznick_cone(&a).edge_generators.contains(c))
        .collect();
    ensure!(simplicial.len() == 4, "{} minimal simplicial circuits", simplicial.len());
    for row in printed {
        let row: Vec<Rat> = ints(&row);
        let hit = simplicial.iter().any(|c| {
            let v = c.full_vector(6);
            let k = v.iter().zip(&row).find(|(_, r)| !r.is_zero()).map(|(x, r)| x / r);
            k.is_some_and(|k| k.is_positive() && v.iter().zip(&row).all(|(x, r)| *x == &k * r))
        });
        ensure!(hit, "row {row:?} has no matching circuit");
    }
    Ok(())
}

fn edge_generators() -> Check {
    let planar = reznick_cone(&fixtures::planar_six()).edge_generators;
    ensure!(planar.len() == 4, "{} edge generators on the planar configuration", planar.len());
    let line: Vec<Vec<usize>> = reznick_cone(&fixtures::segment(4)).edge_generators.into_iter().map(|c| c.support).collect();
    ensure!(line == vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4]], "line generators {line:?}");
    Ok(())
}

fn sonc_complex_census() -> Check {
    let (census, subs) = complex_census(&fixtures::planar_six()).map_err(|e| e.to_string())?;
    ensure!(census.len() == 10, "{} distinct complexes over {subs} subdivisions", census.len());
    Ok(())
}

fn discriminant_vanishing() -> Check {
    let a = Arc::new(fixtures::planar_six());
    for (k, d) in ImplicitPolynomial::planar_six().iter().enumerate() {
        let w = WeightVector(fixtures::planar_six_chart_weights()[k].clone());
        let chart = build_chart(&a, &subdivide(&a, &w).map_err(|e| e.to_string())?);
        let samples = seeded_samples(&chart, 100, 2024 + k as u64);
        let bad = samples.iter().filter(|s| !verify_vanishing(d, s).is_zero()).count();
        ensure!(bad == 0, "{} of 100 samples miss {}", bad, d.name);
    }
    let d0 = ImplicitPolynomial::named("D0").unwrap();
    let d1 = ImplicitPolynomial::named("D1").unwrap();
    ensure!(d0.eval(&ints(&[3, -2, 3, -7, -1, 4])).is_zero(), "D0 witness");
    ensure!(d1.eval(&ints(&[1, 1, 1, -4, -2, 3])).is_zero(), "D1 witness");
    // the witnesses are the images of the unit scales at z = 1
    let trivial = build_chart(&a, &RegularSubdivision::trivial(&a));
    let s = hk_sample(&trivial, &ints(&[1, 1, 1, 1]), &[ToricPoint::ones(2)], &[]).map_err(|e| e.to_string())?;
    ensure!(s.a == ints(&[3, -2, 3, -7, -1, 4]), "trivial chart at unit parameters gives {:?}", s.a);
    Ok(())
}

fn codimension_probe() -> Check {
    let a = Arc::new(fixtures::planar_six());
    let r = codim_probe(&build_chart(&a, &RegularSubdivision::trivial(&a)), 11, 5);
    ensure!(r.expected == 5 && r.ranks.iter().all(|&x| x == 5), "trivial chart ranks {:?}", r.ranks);
    let m = Arc::new(fixtures::motzkin());
    let r = codim_probe(&build_chart(&m, &RegularSubdivision::trivial(&m)), 12, 5);
    ensure!(r.expected == 3 && r.ranks.iter().all(|&x| x == 3), "Motzkin chart ranks {:?}", r.ranks);
    Ok(())
}

fn univariate_strata() -> Check {
    let labels = enumerate_labels(4, true);
    let shown: Vec<(usize, String)> = labels.iter().map(|l| (slice_dim(l), l.to_string())).collect();
    let want = vec![(2, "{1,2,3}".to_string()), (2, "{1|3}".to_string()), (1, "{1,3}".to_string())];
    ensure!(shown == want, "slice labels {shown:?}");
    let p = build_poset(&labels);
    let from = labels.iter().position(|l| l.to_string() == "{1|3}").unwrap();
    let to = labels.iter().position(|l| l.to_string() == "{1,3}").unwrap();
    ensure!(p.covers.contains(&(from, to)), "{{1,3}} not below {{1|3}}");
    Ok(())
}

/// Counts labels of dimension `d` directly: choose the used circuits, then bars at gaps.
fn codim1_brute(d: usize) -> usize {
    let m = d - 1;
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        let used: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
        let gaps = used.windows(2).filter(|w| w[1] > w[0] + 1).count();
        for bars in 0u32..(1 << gaps) {
            if used.len() + bars.count_ones() as usize + usize::from(!used.is_empty()) == d {
                count += 1;
            }
        }
    }
    count
}

fn fibonacci_recurrence() -> Check {
    let counts: Vec<usize> = (3..=10).map(|d| codim1_count(d).0).collect();
    for (k, d) in (3..=10).enumerate() {
        ensure!(counts[k] == codim1_brute(d), "d = {d}: {} vs brute force {}", counts[k], codim1_brute(d));
    }
    for d in 5..=10 {
        let (l, l1, l2) = (counts[d - 3], counts[d - 4], counts[d - 5]);
        ensure!(l == l1 + l2, "d = {d}: {l} != {l1} + {l2}");
    }
    Ok(())
}

/// Interior iff a middle cubic can absorb the gap: some `ζ > 1` with `4a₀a₂ ≥ a₁²`.
fn quartic_oracle(w1: &Rat, w3: &Rat) -> std::result::Result<bool, String> {
    let one = Rat::one();
    let p = |z1: &Rat, z2: &Rat| {
        let a0 = int(2) * w1 * (z1 - &one);
        let a1 = w1 * w1 * (z1 * z1 - &one) + w3 * w3 * (z2 * z2 - &one);
        let a2 = int(2) * w3 * (z2 - &one);
        int(4) * a0 * a2 - &a1 * &a1
    };
    let pw = w1 * w3;
    let q_facet = |x1: &Rat, x2: &Rat| {
        int(8) * &pw * (int(2) - &pw) * x1 * x2 - int(4) * w1.pow(4) * x1 * x1 - int(4) * w3.pow(4) * x2 * x2
    };
    let mut dirs: Vec<(Rat, Rat)> = (1..=4).flat_map(|i| (1..=4).map(move |j| (rat(i, 2), rat(j, 2)))).collect();
    dirs.push((w3 * w3, w1 * w1));
    let facet = dirs.iter().any(|(x1, x2)| q_facet(x1, x2).is_positive());
    let sampled = dirs.iter().any(|(x1, x2)| {
        (0..=16).any(|k| {
            let s = rat(1, 1 << k);
            !p(&(&one + &s * x1), &(&one + &s * x2)).is_negative()
        })
    });
    ensure!(facet == sampled, "facet criterion and sampled p disagree at ({w1}, {w3})");
    Ok(sampled)
}

fn quartic_criterion() -> Check {
    let mut agree = 0;
    for i in 1..=50 {
        for j in 1..=50 {
            let (w1, w3) = (rat(3 * i, 50), rat(3 * j, 50));
            let interior = quartic_oracle(&w1, &w3)?;
            let got = quartic_boundary_test(&w1, &w3).map_err(|e| e.to_string())?;
            if (got == QuarticVerdict::Interior) == interior {
                agree += 1;
            }
        }
    }
    ensure!(agree == 2500, "{agree} of 2500 grid points agree");
    Ok(())
}

fn boundary_samples() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let cfg = MinimizeConfig::default();
    let configs: Vec<Arc<SupportSet>> = vec![Arc::new(fixtures::planar_six()), Arc::new(fixtures::segment(4))];
    let mut pools = Vec::new();
    for a in &configs {
        let subs: Vec<RegularSubdivision> = enumerate_regular_subdivisions(a)
            .map_err(|e| e.to_string())?
            .into_iter()
            .filter(|s| !build_chart(a, s).circuits.is_empty())
            .collect();
        pools.push(subs);
    }
    let mut vanishing_checks = 0;
    for k in 0..50 {
        let which = k % 2;
        let a = &configs[which];
        let sub = &pools[which][rng.gen_range(0..pools[which].len())];
        let w = sub.witness.clone().ok_or("subdivision without witness")?;
        let n_terms = build_chart(a, sub).circuits.len();
        let t: Vec<Rat> = (0..n_terms).map(|_| rat(rng.gen_range(1..=9), rng.gen_range(1..=9))).collect();
        let bs = boundary_sample(a, &w, &t).map_err(|e| e.to_string())?;
        if a.n() == 1 {
            let p = bs.sum.to_univariate_poly().ok_or("no polynomial form")?;
            ensure!(nonneg_on_positive_halfline(&p), "sample {k} negative somewhere: {p}");
        } else {
            let r = check_nonneg_numeric(&bs.sum, &cfg).map_err(|e| e.to_string())?;
            ensure!(r.min_found >= -1e-9, "sample {k} reaches {}", r.min_found);
        }
        for (cell, zero) in cell_truncations_vanish(a, &bs).map_err(|e| e.to_string())? {
            ensure!(zero, "sample {k}: truncation to cell {:?} is nonzero at its vertex", sub.cells[cell]);
            vanishing_checks += 1;
        }
    }
    ensure!(vanishing_checks > 0, "no cell carried a full-dimensional circuit");
    Ok(())
}

fn equality_verdicts() -> Check {
    let v = |a: &SupportSet| check_equality(a).map_err(|e| e.to_string());
    let r = v(&SupportSet::univariate(&[0, 1, 2]).unwrap())?;
    ensure!(r.verdict == Verdict::Equal, "{{0,1,2}}: {:?}", r.verdict);
    let r = v(&fixtures::generic_six())?;
    ensure!(r.verdict == Verdict::Equal, "generic six: {:?}", r.verdict);
    ensure!(r.nonempty().all(|e| e.maximal.len() == 1), "a complex with several maximal cells");
    let r = v(&fixtures::planar_six())?;
    ensure!(r.verdict == Verdict::PreconditionViolated, "planar six: {:?}", r.verdict);
    Ok(())
}

fn main() -> ExitCode {
    let checks: [(&str, fn() -> Check); 10] = [
        ("circuit census of the planar six-point support", circuit_census),
        ("Reznick cone edge generators", edge_generators),
        ("ten distinct sonc-complexes", sonc_complex_census),
        ("exact vanishing of D0..D5 on chart samples", discriminant_vanishing),
        ("Jacobian rank of the chart map", codimension_probe),
        ("quartic strata labels and closure", univariate_strata),
        ("Fibonacci recurrence of codimension-one strata", fibonacci_recurrence),
        ("quartic boundary criterion on a 50x50 grid", quartic_criterion),
        ("boundary samples: nonnegative, truncations vanish", boundary_samples),
        ("equality verdicts", equality_verdicts),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", checks.len() - failed, checks.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
