//! End-to-end acceptance checks. Each test guards one observable guarantee
//! and prints a single [PASS]/[FAIL]/[SKIP] line (run with --nocapture to see
//! the lines for passing tests). The Monte Carlo checks use desk-scale
//! replicate counts with fixed seeds, so every band below is deterministic.

use rand::Rng;
use tiecop::gof::cvm_statistic;
use tiecop::sim::{Method, StrategyKind};
use tiecop::{
    censored_likelihood, fit_average_rank, fit_censoring, gof_test, run_scenario,
    CensoredData, Family, ScenarioConfig, ScenarioReport, Seed, TieMechanism, TiePattern,
    TieStrategy,
};

const FAMILIES: [Family; 4] = [
    Family::Clayton,
    Family::SurvivalClayton,
    Family::Gumbel,
    Family::Gaussian,
];

fn verdict(name: &str, pass: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{name}: {detail}");
}

// ---------------------------------------------------------------------------
// adaptive Simpson quadrature, the independent oracle for likelihood values

fn simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) * (fa + 4.0 * flm + fm) / 6.0;
    let right = (b - m) * (fm + 4.0 * frm + fb) / 6.0;
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        left + right + err / 15.0
    } else {
        simpson(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
            + simpson(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
    }
}

fn integrate_abs<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0;
    simpson(f, a, fa, b, fb, m, fm, whole, tol, 24)
}

/// Integrate to a relative tolerance: a coarse pass sizes the absolute
/// tolerance of the second pass. The 5e-13 floor keeps the recursion from
/// chasing roundoff noise.
fn integrate_rel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel: f64) -> f64 {
    let rough = integrate_abs(f, a, b, 1e-12).abs();
    integrate_abs(f, a, b, (rough * rel.max(5e-13)).max(f64::MIN_POSITIVE))
}

fn integrate_2d<F: Fn(f64, f64) -> f64>(f: &F, a: f64, b: f64, c: f64, d: f64) -> f64 {
    integrate_rel(&|u| integrate_rel(&|v| f(u, v), c, d, 1e-10), a, b, 1e-9)
}

// ---------------------------------------------------------------------------

#[test]
fn analytic_copula_identities() {
    let grid: Vec<f64> = (1..20).map(|i| i as f64 * 0.05).collect();
    let fd_grid = [0.1, 0.25, 0.5, 0.75, 0.9];
    let mut worst_boundary = 0.0f64;
    let mut worst_frechet = 0.0f64;
    let mut worst_indep = 0.0f64;
    let mut worst_fd_deriv = 0.0f64;
    let mut worst_fd_pdf = 0.0f64;
    let mut worst_roundtrip = 0.0f64;

    for fam in FAMILIES {
        let taus: &[f64] = if fam == Family::Gaussian {
            &[-0.75, -0.5, -0.25, 0.25, 0.5, 0.75]
        } else {
            &[0.25, 0.5, 0.75]
        };
        for &tau in taus {
            let th = fam.tau_to_theta(tau).unwrap();
            for &u in &grid {
                worst_boundary = worst_boundary
                    .max(fam.cdf(th, 0.0, u).abs())
                    .max(fam.cdf(th, u, 0.0).abs())
                    .max((fam.cdf(th, 1.0, u) - u).abs())
                    .max((fam.cdf(th, u, 1.0) - u).abs())
                    .max((fam.dcdu(th, u, 1.0) - 1.0).abs())
                    .max(fam.dcdu(th, u, 0.0).abs());
                for &v in &grid {
                    let c = fam.cdf(th, u, v);
                    let lo = (u + v - 1.0).max(0.0);
                    let hi = u.min(v);
                    worst_frechet = worst_frechet.max(lo - c).max(c - hi);
                }
            }
            for &u in &fd_grid {
                for &v in &fd_grid {
                    let h = 1e-6;
                    let fd_u = (fam.cdf(th, u + h, v) - fam.cdf(th, u - h, v)) / (2.0 * h);
                    let fd_v = (fam.cdf(th, u, v + h) - fam.cdf(th, u, v - h)) / (2.0 * h);
                    worst_fd_deriv = worst_fd_deriv
                        .max((fam.dcdu(th, u, v) - fd_u).abs())
                        .max((fam.dcdv(th, u, v) - fd_v).abs());
                    // wider step: the density is a second derivative of C, so
                    // FD noise grows as 1/(h * pdf) where the density is tiny
                    let h = 1e-4;
                    let fd_pdf =
                        (fam.dcdu(th, u, v + h) - fam.dcdu(th, u, v - h)) / (2.0 * h);
                    worst_fd_pdf = worst_fd_pdf
                        .max((fam.pdf(th, u, v) - fd_pdf).abs() / fam.pdf(th, u, v));
                }
            }
        }
        // tau <-> theta round trips across the family's whole range
        for &tau in &grid {
            let taus = if fam == Family::Gaussian {
                vec![tau, -tau]
            } else {
                vec![tau]
            };
            for t in taus {
                let back = fam.theta_to_tau(fam.tau_to_theta(t).unwrap()).unwrap();
                worst_roundtrip = worst_roundtrip.max((back - t).abs());
            }
        }
    }

    // independence reductions: exact at Gumbel theta = 1 and Gaussian rho = 0,
    // limiting for Clayton as theta -> 0
    for &u in &fd_grid {
        for &v in &fd_grid {
            worst_indep = worst_indep
                .max((Family::Gumbel.cdf(1.0, u, v) - u * v).abs())
                .max((Family::Gaussian.cdf(0.0, u, v) - u * v).abs());
            let near = (Family::Clayton.cdf(1e-8, u, v) - u * v).abs();
            assert!(near < 1e-6, "Clayton small-theta limit off by {near:.2e}");
        }
    }

    let pass = worst_boundary <= 1e-14
        && worst_frechet <= 1e-12
        && worst_indep <= 1e-13
        && worst_fd_deriv <= 1e-5
        && worst_fd_pdf <= 1e-3
        && worst_roundtrip <= 1e-12;
    verdict(
        "analytic copula identities",
        pass,
        &format!(
            "boundary {worst_boundary:.1e}, frechet {worst_frechet:.1e}, indep {worst_indep:.1e}, \
             fd deriv {worst_fd_deriv:.1e}, fd pdf rel {worst_fd_pdf:.1e}, roundtrip {worst_roundtrip:.1e}"
        ),
    );
}

#[test]
fn censored_likelihood_matches_density_quadrature() {
    // interval endpoints stay inside [0.02, 0.98]; full rectangles use
    // [0.1, 0.9] so the rectangle mass stays large enough for a difference
    // of CDF corners to carry the target relative accuracy in f64
    fn interval<R: Rng>(rng: &mut R, lo: f64, hi: f64, wmin: f64, wmax: f64) -> (f64, f64) {
        let w = wmin + (wmax - wmin) * rng.random::<f64>();
        let a = lo + (hi - lo - w) * rng.random::<f64>();
        (a, a + w)
    }
    fn point<R: Rng>(rng: &mut R) -> f64 {
        0.02 + 0.96 * rng.random::<f64>()
    }

    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for fam in FAMILIES {
        for tau in [0.25, 0.5, 0.75] {
            let th = fam.tau_to_theta(tau).unwrap();
            let mut rng = Seed(40217).child(cases as u64).rng();
            for i in 0..100 {
                let (got, want) = match i % 4 {
                    0 => {
                        let (ul, uu) = interval(&mut rng, 0.1, 0.9, 0.05, 0.3);
                        let (vl, vu) = interval(&mut rng, 0.1, 0.9, 0.05, 0.3);
                        (
                            censored_likelihood(fam, th, ul, uu, vl, vu),
                            integrate_2d(&|u, v| fam.pdf(th, u, v), ul, uu, vl, vu),
                        )
                    }
                    1 => {
                        let (ul, uu) = interval(&mut rng, 0.02, 0.98, 0.01, 0.3);
                        let v = point(&mut rng);
                        (
                            censored_likelihood(fam, th, ul, uu, v, v),
                            integrate_rel(&|u| fam.pdf(th, u, v), ul, uu, 1e-9),
                        )
                    }
                    2 => {
                        let (vl, vu) = interval(&mut rng, 0.02, 0.98, 0.01, 0.3);
                        let u = point(&mut rng);
                        (
                            censored_likelihood(fam, th, u, u, vl, vu),
                            integrate_rel(&|v| fam.pdf(th, u, v), vl, vu, 1e-9),
                        )
                    }
                    _ => {
                        let (u, v) = (point(&mut rng), point(&mut rng));
                        (censored_likelihood(fam, th, u, u, v, v), fam.pdf(th, u, v))
                    }
                };
                assert!(want > 0.0, "oracle gave nonpositive mass");
                worst = worst.max((got - want).abs() / want);
                cases += 1;
            }
        }
    }
    verdict(
        "censored likelihood matches density quadrature",
        worst <= 1e-6,
        &format!("{cases} cases, max relative gap {worst:.2e}"),
    );
}

#[test]
fn censoring_fit_matches_density_mple_on_tie_free_data() {
    let mut worst = 0.0f64;
    let mut rng = Seed(50333).rng();
    for k in 0..50u64 {
        let fam = FAMILIES[(k % 4) as usize];
        let mut tau = rng.random_range(0.1..0.85);
        if fam == Family::Gaussian && rng.random::<bool>() {
            tau = -tau;
        }
        let n = rng.random_range(50..=200);
        let th = fam.tau_to_theta(tau).unwrap();
        let pts = fam.sample(th, n, &mut rng).unwrap();
        let xs: Vec<f64> = pts.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = pts.iter().map(|p| p.1).collect();
        let data = CensoredData::from_raw(&xs, &ys).unwrap();
        assert!(!(0..n).any(|i| data.x_tied(i) || data.y_tied(i)), "sample had ties");
        let a = fit_censoring(fam, &data, None).unwrap();
        let b = fit_average_rank(fam, &data, None).unwrap();
        assert!(a.converged && b.converged);
        worst = worst.max((a.tau - b.tau).abs());
    }
    verdict(
        "censoring fit matches density mple on tie-free data",
        worst <= 1e-8,
        &format!("50 datasets, max |tau gap| {worst:.2e}"),
    );
}

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    s
}

/// Bitwise equality of the sorted censoring bounds of two datasets.
fn same_bounds(a: &CensoredData, b: &CensoredData) -> bool {
    sorted(&a.u_lo) == sorted(&b.u_lo)
        && sorted(&a.u_up) == sorted(&b.u_up)
        && sorted(&a.v_lo) == sorted(&b.v_lo)
        && sorted(&a.v_up) == sorted(&b.v_up)
}

#[test]
fn bootstrap_replicates_preserve_tie_pattern_bitwise() {
    // nine points, x tied at ranks {3,4,5} and {7,8}, y tied at {1,2} and {3,4,5}
    let x = [1.0, 2.0, 3.0, 3.0, 3.0, 6.0, 7.0, 7.0, 9.0];
    let y = [0.5, 0.1, 0.1, 0.4, 0.2, 0.2, 0.2, 0.3, 0.6];
    let toy = CensoredData::from_raw(&x, &y).unwrap();
    let expect_up: Vec<f64> = [1.0, 2.0, 5.0, 5.0, 5.0, 6.0, 8.0, 8.0, 9.0]
        .iter()
        .map(|r| r / 10.0)
        .collect();
    let expect_lo: Vec<f64> = [1.0, 2.0, 3.0, 3.0, 3.0, 6.0, 7.0, 7.0, 9.0]
        .iter()
        .map(|r| r / 10.0)
        .collect();
    assert_eq!(sorted(&toy.u_up), expect_up);
    assert_eq!(sorted(&toy.u_lo), expect_lo);

    let mut checked = 0usize;
    let mut exact = 0usize;
    let pattern = TiePattern::of(&toy);
    let th = Family::Clayton.tau_to_theta(0.5).unwrap();
    let mut rng = Seed(60071).rng();
    for _ in 0..1000 {
        let pts = Family::Clayton.sample(th, toy.n(), &mut rng).unwrap();
        let rep = pattern.imprint(&pts).unwrap();
        exact += same_bounds(&rep, &toy) as usize;
        checked += 1;
    }

    for k in 0..20u64 {
        let fam = FAMILIES[(k % 4) as usize];
        let mut rng = Seed(60072).child(k).rng();
        let n = 20 + 3 * k as usize;
        let th = fam.tau_to_theta(0.4).unwrap();
        let pts = fam.sample(th, n, &mut rng).unwrap();
        let tied = TieMechanism::round_both(1).apply(&pts);
        let xs: Vec<f64> = tied.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = tied.iter().map(|p| p.1).collect();
        let data = CensoredData::from_raw(&xs, &ys).unwrap();
        let pattern = TiePattern::of(&data);
        for _ in 0..1000 {
            let fresh = fam.sample(th, n, &mut rng).unwrap();
            let rep = pattern.imprint(&fresh).unwrap();
            exact += same_bounds(&rep, &data) as usize;
            checked += 1;
        }
    }
    verdict(
        "bootstrap replicates preserve tie pattern bitwise",
        exact == checked,
        &format!("{exact}/{checked} replicates with identical sorted bounds"),
    );
}

fn method_stats<'r>(rep: &'r ScenarioReport, m: Method) -> &'r tiecop::sim::MethodStats {
    rep.methods.iter().find(|s| s.method == m).unwrap()
}

#[test]
fn rounding_bias_censoring_beats_rank_baselines() {
    let cfg = ScenarioConfig::parse(
        "study = point\n\
         family = gumbel\n\
         tau = 0.75\n\
         n = 200\n\
         mechanism = round-margin1\n\
         decimals = 1\n\
         replicates = 200\n\
         methods = censoring, average-rank, random-break\n\
         random_break_m = 100\n\
         seed = 11001\n",
    )
    .unwrap();
    let rep = run_scenario(&cfg).unwrap();
    let c = method_stats(&rep, Method::Censoring).bias;
    let a = method_stats(&rep, Method::AverageRank).bias;
    let r = method_stats(&rep, Method::RandomBreak).bias;
    let pass = c.abs() <= 0.015 && c.abs() < a.abs() && c.abs() < r.abs();
    verdict(
        "rounding bias censoring beats rank baselines",
        pass,
        &format!("tau bias: censoring {c:+.4}, average-rank {a:+.4}, random-break {r:+.4}"),
    );
}

#[test]
fn rmse_stable_across_tie_share_sweep() {
    let lambdas = [0.2, 0.4, 0.6, 0.8, 1.0];
    let mut rmse_c = Vec::new();
    let mut rmse_a = Vec::new();
    for (i, lam) in lambdas.iter().enumerate() {
        let cfg = ScenarioConfig::parse(&format!(
            "study = point\n\
             family = gumbel\n\
             tau = 0.75\n\
             n = 200\n\
             mechanism = threshold-round\n\
             decimals = 1\n\
             lambda = {lam}\n\
             replicates = 200\n\
             methods = censoring, average-rank\n\
             seed = {}\n",
            12000 + i
        ))
        .unwrap();
        let rep = run_scenario(&cfg).unwrap();
        rmse_c.push(method_stats(&rep, Method::Censoring).rmse);
        rmse_a.push(method_stats(&rep, Method::AverageRank).rmse);
    }
    let (min_c, max_c) = (
        rmse_c.iter().cloned().fold(f64::INFINITY, f64::min),
        rmse_c.iter().cloned().fold(0.0, f64::max),
    );
    let spread = max_c / min_c - 1.0;
    let pass = spread < 0.30 && rmse_a[4] > rmse_c[4];
    verdict(
        "rmse stable across tie share sweep",
        pass,
        &format!(
            "censoring rmse spread {:.0}% over lambda {:?}; at lambda=1: censoring {:.4} vs average-rank {:.4}",
            100.0 * spread,
            lambdas,
            rmse_c[4],
            rmse_a[4]
        ),
    );
}

#[test]
fn bootstrap_ci_coverage_within_band() {
    let cfg = ScenarioConfig::parse(
        "study = coverage\n\
         family = clayton\n\
         tau = 0.5\n\
         n = 100\n\
         mechanism = round-margin1\n\
         decimals = 1\n\
         replicates = 200\n\
         B = 300\n\
         alpha = 0.05\n\
         seed = 13001\n",
    )
    .unwrap();
    let rep = run_scenario(&cfg).unwrap();
    let cov = rep.coverage.unwrap();
    let pass = (0.89..=0.98).contains(&cov.rate);
    verdict(
        "bootstrap ci coverage within band",
        pass,
        &format!(
            "coverage {:.1}% over {} replicates (nominal 95%), mean width {:.3}",
            100.0 * cov.rate,
            cov.n_ok,
            cov.mean_width
        ),
    );
}

fn gof_scenario(family: &str, hypotheses: &str, strategy: StrategyKind, seed: u64) -> ScenarioReport {
    let strat = match strategy {
        StrategyKind::Match => "match",
        StrategyKind::Round => "round",
        StrategyKind::None => "none",
    };
    let cfg = ScenarioConfig::parse(&format!(
        "study = gof\n\
         family = {family}\n\
         tau = 0.5\n\
         n = 100\n\
         mechanism = round-margin1\n\
         decimals = 1\n\
         replicates = 200\n\
         B = 200\n\
         strategy = {strat}\n\
         alpha = 0.05\n\
         hypotheses = {hypotheses}\n\
         seed = {seed}\n",
    ))
    .unwrap();
    run_scenario(&cfg).unwrap()
}

#[test]
fn gof_size_in_band_and_power_detects_wrong_family() {
    // size under the true hypothesis for each family; power when the data are
    // Clayton and the hypothesis is Gumbel
    let clayton = gof_scenario("clayton", "clayton, gumbel", StrategyKind::Match, 14001);
    let gumbel = gof_scenario("gumbel", "gumbel", StrategyKind::Match, 14002);
    let gauss = gof_scenario("gaussian", "gaussian", StrategyKind::Match, 14003);
    let rate = |rep: &ScenarioReport, fam: Family| {
        rep.rejections
            .iter()
            .find(|r| r.hypothesis == fam)
            .unwrap()
            .rate
    };
    let size_c = rate(&clayton, Family::Clayton);
    let size_g = rate(&gumbel, Family::Gumbel);
    let size_n = rate(&gauss, Family::Gaussian);
    let power = rate(&clayton, Family::Gumbel);
    let band = 0.02..=0.10;
    let pass = band.contains(&size_c)
        && band.contains(&size_g)
        && band.contains(&size_n)
        && power >= 0.85;
    verdict(
        "gof size in band and power detects wrong family",
        pass,
        &format!(
            "size at 5%: clayton {:.1}%, gumbel {:.1}%, gaussian {:.1}%; power clayton-vs-gumbel {:.1}%",
            100.0 * size_c,
            100.0 * size_g,
            100.0 * size_n,
            100.0 * power
        ),
    );
}

#[test]
fn tie_blind_bootstrap_overrejects_under_ties() {
    let rep = gof_scenario("gumbel", "gumbel", StrategyKind::None, 15001);
    let size = rep.rejections[0].rate;
    verdict(
        "tie blind bootstrap overrejects under ties",
        size > 0.20,
        &format!("tie-free replicates give size {:.1}% at nominal 5%", 100.0 * size),
    );
}

#[test]
fn real_data_fit_and_gof_when_csv_provided() {
    let name = "real data fit and gof";
    let Ok(path) = std::env::var("TIECOP_INSURANCE_CSV") else {
        println!(
            "[SKIP] {name}: set TIECOP_INSURANCE_CSV to a loss,expense csv to enable"
        );
        return;
    };
    let text = std::fs::read_to_string(&path).expect("readable csv");
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut cols = t.split(',');
        let (a, b) = (cols.next().unwrap_or(""), cols.next().unwrap_or(""));
        match (a.trim().parse::<f64>(), b.trim().parse::<f64>()) {
            (Ok(x), Ok(y)) => {
                xs.push(x);
                ys.push(y);
            }
            _ if i == 0 => continue, // header row
            _ => panic!("line {}: expected two numeric columns", i + 1),
        }
    }
    let data = CensoredData::from_raw(&xs, &ys).unwrap();
    let fit = fit_censoring(Family::Gumbel, &data, None).unwrap();
    let gum = gof_test(
        Family::Gumbel,
        &data,
        1000,
        Seed(16001),
        TieStrategy::Match,
        false,
        None,
    )
    .unwrap();
    let mut worst_other = 0.0f64;
    for fam in [Family::Clayton, Family::SurvivalClayton, Family::Gaussian] {
        let g = gof_test(fam, &data, 1000, Seed(16001), TieStrategy::Match, false, None)
            .unwrap();
        worst_other = worst_other.max(g.p_value);
    }
    let pass = (fit.theta - 1.425).abs() <= 0.005
        && (fit.tau - 0.298).abs() <= 0.005
        && (0.10..=0.25).contains(&gum.p_value)
        && worst_other < 0.01;
    verdict(
        name,
        pass,
        &format!(
            "n {} theta {:.4} tau {:.4}, gumbel p {:.3}, max other-family p {:.3}",
            data.n(),
            fit.theta,
            fit.tau,
            gum.p_value,
            worst_other
        ),
    );
}

/// The distance functional against a hand-enumerable case: four tie-free
/// points against the independence limit of the Gumbel family.
#[test]
fn cvm_distance_matches_hand_enumeration() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y = [1.0, 4.0, 2.0, 3.0];
    let d = CensoredData::from_raw(&x, &y).unwrap();
    // pseudo points (.2,.2) (.4,.8) (.6,.4) (.8,.6); C_n at them: .25 .5 .5 .75
    let want: f64 = [(0.25, 0.04), (0.5, 0.32), (0.5, 0.24), (0.75, 0.48)]
        .iter()
        .map(|(cn, uv)| (cn - uv) * (cn - uv))
        .sum();
    let got = cvm_statistic(Family::Gumbel, 1.0, &d);
    verdict(
        "cvm distance matches hand enumeration",
        (got - want).abs() < 1e-15,
        &format!("distance {got:.6} vs enumerated {want:.6}"),
    );
}
