//! Fast invariant suite: zero table, theta modularity, Laplace's formula,
//! the Bessel recurrence, the generating identity and the `r_Q` oracle.

use std::path::Path;

use serde::Serialize;

use linnik_core::arithmetic::{
    compute_rq, generating_identity, sieve_von_mangoldt, theta_modular_residual, ComplexPoint,
};
use linnik_core::parallel::Neumaier;
use linnik_core::specfun::{bessel_j, laplace_line_integral, PrecisionConfig};
use linnik_core::zeros::{bundled_zeros, load_zeros, LoadOptions};
use linnik_core::Complex64;

use crate::Failure;

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn check(name: &'static str, f: impl FnOnce() -> Result<String, String>) -> Check {
    let t = std::time::Instant::now();
    let r = f();
    if std::env::var_os("LINNIK_SELFTEST_TIMING").is_some() {
        eprintln!("{name}: {:?}", t.elapsed());
    }
    match r {
        Ok(detail) => Check { name, pass: true, detail },
        Err(detail) => Check { name, pass: false, detail },
    }
}

fn zeros_check(path: Option<&Path>) -> Result<String, String> {
    let zs = match path {
        Some(p) => load_zeros(p, LoadOptions::default()).map_err(|e| e.to_string())?,
        None => bundled_zeros(),
    };
    if zs.len() < 50 {
        return Err(format!("only {} zeros, need 50", zs.len()));
    }
    Ok(format!("count={}", zs.len()))
}

fn theta_check() -> Result<String, String> {
    let mut worst = 0.0f64;
    for (a, y) in [(0.05, 0.0), (0.3, 1.0), (1.0, 0.3), (2.0, -3.0), (0.8, 5.0)] {
        let z = ComplexPoint::new(a, y).map_err(|e| e.to_string())?;
        worst = worst.max(theta_modular_residual(z).map_err(|e| e.to_string())?);
    }
    if worst <= 1e-12 {
        Ok(format!("max residual {worst:.2e}"))
    } else {
        Err(format!("residual {worst:.2e} exceeds 1e-12"))
    }
}

fn laplace_check() -> Result<String, String> {
    let mut worst = 0.0f64;
    for s in [Complex64::new(2.5, 0.0), Complex64::new(3.0, 14.134725), Complex64::new(4.0, -6.0)] {
        let v = laplace_line_integral(s, 10.0, 0.1, 1e-11).map_err(|e| e.to_string())?;
        worst = worst.max((v.value - v.closed_form).norm() / v.closed_form.norm());
    }
    if worst <= 1e-8 {
        Ok(format!("max relative error {worst:.2e}"))
    } else {
        Err(format!("relative error {worst:.2e} exceeds 1e-8"))
    }
}

fn recurrence_check() -> Result<String, String> {
    let cfg = PrecisionConfig::default();
    let mut worst = 0.0f64;
    for (nu, u) in [(Complex64::new(2.0, 0.0), 10.0), (Complex64::new(3.5, 14.134725), 100.0), (Complex64::new(0.5, 3.0), 1.0)] {
        let j = |n: Complex64| bessel_j(n, u, &cfg).map_err(|e| e.to_string());
        let (a, b, c) = (j(nu - 1.0)?, j(nu)?, j(nu + 1.0)?);
        let r = (a + c - 2.0 * nu / u * b).norm() / (a.norm() + c.norm());
        worst = worst.max(r);
    }
    if worst <= 1e-9 {
        Ok(format!("max residual {worst:.2e}"))
    } else {
        Err(format!("residual {worst:.2e} exceeds 1e-9"))
    }
}

fn identity_check() -> Result<String, String> {
    let lam = sieve_von_mangoldt(4000).map_err(|e| e.to_string())?;
    let rq = compute_rq(&lam, 4000).map_err(|e| e.to_string())?;
    let z = ComplexPoint::new(1.0 / 50.0, 0.5).map_err(|e| e.to_string())?;
    let g = generating_identity(&lam, &rq, z, 4000).map_err(|e| e.to_string())?;
    if g.residual <= g.bound {
        Ok(format!("residual {:.2e} within bound {:.2e}", g.residual, g.bound))
    } else {
        Err(format!("residual {:.2e} exceeds bound {:.2e}", g.residual, g.bound))
    }
}

/// Triple loop over `m1 + m2² + m3² = n`, summed in the table's order.
fn rq_check() -> Result<String, String> {
    const N: usize = 200;
    let lam = sieve_von_mangoldt(N as u64).map_err(|e| e.to_string())?;
    let rq = compute_rq(&lam, N).map_err(|e| e.to_string())?;
    for n in 1..=N {
        let mut acc = Neumaier::new();
        let mut m2 = 1;
        while m2 * m2 < n {
            let mut m3 = 1;
            while m2 * m2 + m3 * m3 < n {
                acc.add(lam.get(n - m2 * m2 - m3 * m3));
                m3 += 1;
            }
            m2 += 1;
        }
        if acc.value() != rq.get(n) {
            return Err(format!("n = {n}: table {} vs oracle {}", rq.get(n), acc.value()));
        }
    }
    Ok(format!("n ≤ {N} exact"))
}

pub fn run(json: bool, zeros: Option<&Path>) -> Result<(), Failure> {
    let checks = vec![
        check("zeros", || zeros_check(zeros)),
        check("theta_modularity", theta_check),
        check("laplace", laplace_check),
        check("bessel_recurrence", recurrence_check),
        check("generating_identity", identity_check),
        check("rq_oracle", rq_check),
    ];
    if json {
        println!("{}", serde_json::to_string_pretty(&checks).expect("plain data serializes"));
    } else {
        for c in &checks {
            println!("{} {} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
    }
    match checks.iter().find(|c| !c.pass) {
        None => Ok(()),
        Some(c) if c.name == "zeros" => Err(Failure::data(anyhow::anyhow!("selftest check '{}' failed: {}", c.name, c.detail))),
        Some(c) => Err(Failure::numeric(anyhow::anyhow!("selftest check '{}' failed: {}", c.name, c.detail))),
    }
}
