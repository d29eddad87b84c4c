//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every tolerance is fixed here.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use alsm::ald::{al_moments, al_pdf, ALParams};
use alsm::alsm::{alsm_moments, alsm_pdf, alsm_pdf_numeric, alsm_sample};
use alsm::fit::{fit, FitConfig};
use alsm::modelsel::{compare, Candidate};
use alsm::specfun::{adaptive_quadrature_with_breaks, QuadratureConfig};
use alsm::{seeded_rng, ALSMParams, ModelTag};
use common::estep_oracle::estep_worst_error;
use common::{family_grid, moment_theta};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn run(id: u32, name: &str, limit: Option<Duration>, f: impl FnOnce() -> Verdict) -> bool {
    let start = Instant::now();
    let mut v = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            v.pass = false;
            v.detail += &format!("; runtime over the {:.0} s limit", limit.as_secs_f64());
        }
    }
    let tag = if v.pass { "PASS" } else { "FAIL" };
    println!("{tag} {id:>2} {name}: {} [{:.1} s]", v.detail, took.as_secs_f64());
    v.pass
}

/// Reference parameters for recovery and monotonicity runs.
fn reference(tag: ModelTag) -> ALSMParams {
    let theta = match tag {
        ModelTag::TpAl => vec![0.8, 4.0],
        ModelTag::SeAl => vec![1.0],
        ModelTag::UgAl => vec![0.3],
        ModelTag::IgAl => vec![1.0],
        ModelTag::PfAl => vec![2.0],
        ModelTag::PAl => vec![3.0],
        ModelTag::UAl => vec![0.9],
        ModelTag::GAl => vec![6.0],
        ModelTag::Al => vec![],
    };
    ALSMParams::from_tag(tag, 0.0, 1.0, 0.8, &theta).unwrap()
}

fn normalization() -> Verdict {
    let cfg = QuadratureConfig::new(1e-12, 1e-10, 2000).unwrap();
    let mut worst = 0.0f64;
    for p in family_grid() {
        let f = |x: f64| alsm_pdf(x, &p);
        let mass = adaptive_quadrature_with_breaks(
            f,
            f64::NEG_INFINITY,
            f64::INFINITY,
            &[-1.0, 0.0, 1.0],
            &cfg,
        );
        match mass {
            Ok(m) => worst = worst.max((m - 1.0).abs()),
            Err(e) => return verdict(false, format!("{}: {e}", p.to_json())),
        }
    }
    verdict(
        worst <= 1e-6,
        format!("72 densities, max |mass - 1| = {worst:.2e} (limit 1e-6)"),
    )
}

fn closed_form_vs_integral() -> Verdict {
    let cfg = QuadratureConfig::new(1e-14, 1e-12, 2000).unwrap();
    let mut worst = (0.0f64, String::new());
    for p in family_grid() {
        for i in 0..100 {
            let x = -10.0 + 20.0 * (i as f64 + 0.5) / 100.0;
            let numeric = match alsm_pdf_numeric(x, &p, &cfg) {
                Ok(v) => v,
                Err(e) => return verdict(false, format!("{} at {x}: {e}", p.to_json())),
            };
            let d = (alsm_pdf(x, &p) - numeric).abs();
            if d > worst.0 {
                worst = (d, format!("{} at x = {x}", p.to_json()));
            }
        }
    }
    verdict(
        worst.0 <= 1e-8,
        format!(
            "100 points x 72 densities, max abs diff {:.2e} (limit 1e-8) at {}",
            worst.0, worst.1
        ),
    )
}

fn simulated_moments() -> Verdict {
    let n = 10_000_000;
    let mut worst = [0.0f64; 4];
    let mut fails = Vec::new();
    for tag in ModelTag::MIXTURES {
        let p = ALSMParams::from_tag(tag, 0.3, 1.2, 0.8, &moment_theta(tag)).unwrap();
        let x = alsm_sample(&p, n, &mut seeded_rng(31));
        let nf = n as f64;
        let mean = x.iter().sum::<f64>() / nf;
        let (mut c2, mut c3, mut c4) = (0.0, 0.0, 0.0);
        for v in &x {
            let d = v - mean;
            c2 += d * d;
            c3 += d * d * d;
            c4 += d * d * d * d;
        }
        let (var, m3, m4) = (c2 / nf, c3 / nf, c4 / nf);
        let m = alsm_moments(&p);
        let want = [m.mean, m.variance, m.skewness, m.kurtosis].map(Option::unwrap);
        let got = [mean, var, m3 / var.powf(1.5), m4 / (var * var)];
        let limits = [0.01, 0.01, 0.05, 0.05];
        for k in 0..4 {
            let rel = (got[k] / want[k] - 1.0).abs();
            worst[k] = worst[k].max(rel);
            if rel > limits[k] {
                fails.push(format!("{tag} moment {}: {} vs {}", k + 1, got[k], want[k]));
            }
        }
    }
    verdict(
        fails.is_empty(),
        format!(
            "1e7 draws x 8 models, worst relative error mean {:.1e}, variance {:.1e}, skewness {:.1e}, kurtosis {:.1e} (limits 1%, 1%, 5%, 5%){}",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            if fails.is_empty() { String::new() } else { format!("; {}", fails.join("; ")) }
        ),
    )
}

fn estep_oracle() -> Verdict {
    let (err, at) = estep_worst_error(2024, 50);
    verdict(
        err <= 1e-8,
        format!("50 probes x 8 models, max relative error {err:.2e} (limit 1e-8) at {at}"),
    )
}

fn monotonicity() -> Verdict {
    let cfg = FitConfig::default();
    let mut worst = 0.0f64;
    let mut fails = Vec::new();
    for tag in ModelTag::MIXTURES {
        for k in 0..20u64 {
            let x = alsm_sample(&reference(tag), 500, &mut seeded_rng(500 + k));
            match fit(tag, &x, &cfg) {
                Ok(r) => {
                    let drop = r
                        .loglik_trace
                        .windows(2)
                        .map(|w| w[0] - w[1])
                        .fold(0.0, f64::max);
                    worst = worst.max(drop);
                    if drop > 1e-10 {
                        fails.push(format!("{tag} dataset {k}: drop {drop:e}"));
                    }
                }
                Err(e) => fails.push(format!("{tag} dataset {k}: {e}")),
            }
        }
    }
    verdict(
        fails.is_empty(),
        format!(
            "20 datasets x 8 models at n = 500, largest per-step decrease {worst:.2e} (limit 1e-10){}",
            if fails.is_empty() { String::new() } else { format!("; {}", fails.join("; ")) }
        ),
    )
}

fn recovery() -> Verdict {
    let mut fails = Vec::new();
    let mut lines = Vec::new();
    for tag in ModelTag::MIXTURES {
        let truth = reference(tag);
        let x = alsm_sample(&truth, 20_000, &mut seeded_rng(7));
        let r = match fit(tag, &x, &FitConfig::default()) {
            Ok(r) => r,
            Err(e) => {
                fails.push(format!("{tag}: {e}"));
                continue;
            }
        };
        let (p, t) = (r.params, truth);
        let mut ok = (p.al.mu - t.al.mu).abs() <= 0.05 * t.al.beta
            && (p.al.beta / t.al.beta - 1.0).abs() <= 0.10
            && (p.al.kappa / t.al.kappa - 1.0).abs() <= 0.10;
        let (th, tt) = (p.mixing.theta(), t.mixing.theta());
        ok &= if tag == ModelTag::TpAl {
            (th[0] - tt[0]).abs() <= 0.05 && (th[1] / tt[1] - 1.0).abs() <= 0.25
        } else {
            (th[0] / tt[0] - 1.0).abs() <= 0.25
        };
        let line = format!(
            "{tag} mu {:.3} beta {:.3} kappa {:.3} theta {:?}",
            p.al.mu,
            p.al.beta,
            p.al.kappa,
            th.iter().map(|v| (v * 1e3).round() / 1e3).collect::<Vec<_>>()
        );
        if !ok {
            fails.push(line.clone());
        }
        lines.push(line);
    }
    verdict(
        fails.is_empty(),
        format!(
            "n = 20000, truth mu 0 beta 1 kappa 0.8; {}{}",
            lines.join("; "),
            if fails.is_empty() { String::new() } else { format!("; out of tolerance: {}", fails.join("; ")) }
        ),
    )
}

fn lr_and_aic() -> Verdict {
    let truth = ALSMParams::from_tag(ModelTag::SeAl, 0.0, 1.0, 0.8, &[1.0]).unwrap();
    let models = [Candidate::Alsm(ModelTag::Al), Candidate::Alsm(ModelTag::SeAl)];
    let (mut rejects, mut al_first, mut errors) = (0, 0, Vec::new());
    for rep in 0..20u64 {
        let x = alsm_sample(&truth, 5000, &mut seeded_rng(700 + rep));
        match compare(&x, &models, &FitConfig::default()) {
            Ok(rows) => {
                if rows[1].lr_pvalue.is_some_and(|p| p < 0.05) {
                    rejects += 1;
                }
                if rows[0].rank_aic == Some(1) {
                    al_first += 1;
                }
                if let Some(n) = &rows[1].note {
                    errors.push(format!("rep {rep}: {n}"));
                }
            }
            Err(e) => errors.push(format!("rep {rep}: {e}")),
        }
    }
    verdict(
        rejects >= 18 && al_first == 0 && errors.is_empty(),
        format!(
            "SE-AL(0,1,0.8,1), n = 5000: LR rejects at 5% in {rejects}/20 (need >= 18), AL ranked first by AIC {al_first} times (need 0){}",
            if errors.is_empty() { String::new() } else { format!("; {}", errors.join("; ")) }
        ),
    )
}

fn nested_limits() -> Verdict {
    let limits: [(ModelTag, Vec<f64>); 8] = [
        (ModelTag::TpAl, vec![1.0 - 1e-9, 2.0]),
        (ModelTag::SeAl, vec![1e7]),
        (ModelTag::UgAl, vec![1e-7]),
        (ModelTag::IgAl, vec![1e-7]),
        (ModelTag::PfAl, vec![1e7]),
        (ModelTag::PAl, vec![1e7]),
        (ModelTag::UAl, vec![1e-7]),
        (ModelTag::GAl, vec![1e8]),
    ];
    let mut worst = 0.0f64;
    for (tag, theta) in limits {
        for &kappa in &[0.5, 1.0, 2.0] {
            let p = ALSMParams::from_tag(tag, 0.2, 1.3, kappa, &theta).unwrap();
            for i in 0..=40 {
                let x = -8.0 + 0.4 * i as f64;
                worst = worst.max((alsm_pdf(x, &p) - al_pdf(x, &p.al)).abs());
            }
        }
    }
    let k1 = al_moments(&ALParams::new(0.0, 1.0, 1.0).unwrap()).kurtosis;
    let k0 = al_moments(&ALParams::new(0.0, 1.0, 1e-3).unwrap()).kurtosis;
    verdict(
        worst <= 1e-4 && k1 == 6.0 && (k0 - 9.0).abs() < 0.05,
        format!("max |ALSM - AL| at the limits {worst:.2e} (limit 1e-4); AL kurtosis {k1} at kappa 1, {k0:.6} at kappa 1e-3"),
    )
}

fn kurtosis_bound() -> Verdict {
    let (mut checked, mut worst, mut fails) = (0, f64::INFINITY, Vec::new());
    for p in family_grid() {
        if let Some(k) = alsm_moments(&p).kurtosis {
            let al = al_moments(&p.al).kurtosis;
            checked += 1;
            worst = worst.min(k - al);
            if k < al - 1e-6 {
                fails.push(p.to_json());
            }
        }
    }
    verdict(
        fails.is_empty(),
        format!(
            "{checked} grid points with finite kurtosis, min (ALSM - AL) kurtosis {worst:.3e} (slack 1e-6){}",
            if fails.is_empty() { String::new() } else { format!("; below: {}", fails.join(", ")) }
        ),
    )
}

fn cli_end_to_end() -> Verdict {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/synthetic_prices.csv");
    let runs: [&[&str]; 5] = [
        &["describe", "--input-format", "yahoo-csv"],
        &["describe", "--input-format", "yahoo-csv", "--format", "json"],
        &["compare", "--input-format", "yahoo-csv", "--format", "csv"],
        &["compare", "--input-format", "yahoo-csv", "--format", "json"],
        &["simulate", "--model", "se-al", "--mu", "0", "--beta", "0.02", "--kappa", "0.9", "--theta", "1", "-n", "400", "--seed", "42"],
    ];
    let invoke = |args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_alsm"));
        cmd.args(args);
        if args[0] != "simulate" {
            cmd.arg("--input").arg(&data);
        }
        cmd.output().unwrap()
    };
    let mut problems = Vec::new();
    let mut bytes = 0;
    for args in runs {
        let (a, b) = (invoke(args), invoke(args));
        if !(a.status.success() && b.status.success()) {
            problems.push(format!("{} exited {:?}", args.join(" "), a.status.code()));
        }
        if a.stdout != b.stdout || a.stderr != b.stderr {
            problems.push(format!("{} output differs between runs", args.join(" ")));
        }
        if args[0] == "compare" && args[4] == "csv" {
            let rows = String::from_utf8_lossy(&a.stdout).lines().count();
            if rows != 12 {
                problems.push(format!("compare table has {rows} lines"));
            }
        }
        bytes += a.stdout.len();
    }
    verdict(
        problems.is_empty(),
        format!(
            "400-row price file through describe and compare (text, CSV, JSON) and simulate, run twice: {}",
            if problems.is_empty() { format!("{bytes} bytes identical") } else { problems.join("; ") }
        ),
    )
}

fn main() {
    let secs = |s| Some(Duration::from_secs(s));
    let results = [
        run(1, "normalization", secs(30), normalization),
        run(2, "closed form vs mixture integral", secs(60), closed_form_vs_integral),
        run(3, "moments vs simulation", secs(120), simulated_moments),
        run(4, "E-step vs quadrature", secs(60), estep_oracle),
        run(5, "EM monotonicity", None, monotonicity),
        run(6, "parameter recovery", secs(180), recovery),
        run(7, "LR and AIC on SE-AL data", None, lr_and_aic),
        run(8, "nested AL limits", None, nested_limits),
        run(9, "kurtosis lower bound", None, kurtosis_bound),
        run(10, "CLI end to end", secs(60), cli_end_to_end),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
