//! Command bodies: target resolution, per-prime sweeps, and text/JSON
//! serialization for every subcommand.

use std::time::Instant;

use anyhow::{anyhow, Context as _};
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde_json::json;

use drinfeld::coeff::{CoeffField, QuadField};
use drinfeld::expand::Expander;
use drinfeld::forms::{companion, monomial_basis, monomial_weight, mu_gamma, parse_form, Form};
use drinfeld::modp::{Filtration, PrimeContext};
use drinfeld::poly::{monic_irreducibles, parse_poly};
use drinfeld::series::KSeries;
use drinfeld::wronskian::{
    verify_theorem_ahlgrenono, verify_theorem_computation, wronskian_serre, wronskian_series,
    CheckResult, VerifyReport,
};
use drinfeld::{Error, Fq, Poly, Rat};

use crate::{Cli, Cmd, Theorem};

pub(crate) struct Config {
    fq: Fq,
    prec: usize,
    json: bool,
    oracle: bool,
    pi: Option<Poly>,
    sweep: Option<u32>,
}

impl Config {
    /// The primes to operate on: `--pi` alone, or the full lexicographic
    /// sweep from `--all-primes-of-degree`.
    fn primes(&self) -> Result<Vec<Poly>, Error> {
        match (&self.pi, self.sweep) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument(
                "--pi and --all-primes-of-degree are mutually exclusive".into(),
            )),
            (Some(pi), None) => Ok(vec![pi.clone()]),
            (None, Some(d)) => {
                if d == 0 {
                    return Err(Error::InvalidArgument("prime degree must be >= 1".into()));
                }
                let mut primes = monic_irreducibles(&self.fq, d);
                primes.sort_by(|a, b| {
                    let key = |p: &Poly| {
                        let mut v: Vec<u64> = p.coeffs().to_vec();
                        v.reverse();
                        v
                    };
                    key(a).cmp(&key(b))
                });
                Ok(primes)
            }
            (None, None) => Err(Error::InvalidArgument(
                "this command needs --pi <poly> or --all-primes-of-degree <d>".into(),
            )),
        }
    }
}

/// Factor q = p^e and build the base-field context.
fn build_fq(q: u64) -> Result<Fq, Error> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be a prime power, got {q}")));
    }
    let mut p = 2;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        p = q;
    }
    let mut e = 0u32;
    let mut rest = q;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    if rest != 1 {
        return Err(Error::InvalidArgument(format!("q must be a prime power, got {q}")));
    }
    Fq::new(p, e)
}

pub(crate) fn run(cli: Cli) -> anyhow::Result<u8> {
    let fq = build_fq(cli.q)?;
    let prec = cli.prec.unwrap_or_else(|| match cli.cmd {
        Cmd::Verify { .. } => {
            let p = fq.p() as usize;
            64.max(p * p * (p + 1) / 2 + 48)
        }
        _ => 64,
    });
    if prec < 2 {
        return Err(anyhow!(Error::InvalidArgument("precision must be at least 2".into())));
    }
    let pi = match &cli.pi {
        Some(s) => Some(parse_poly(&fq, s).with_context(|| format!("parsing --pi '{s}'"))?),
        None => None,
    };
    let cfg = Config {
        fq: fq.clone(),
        prec,
        json: cli.json,
        oracle: cli.oracle,
        pi,
        sweep: cli.all_primes_of_degree,
    };
    let ex = Expander::new(fq, prec);
    match cli.cmd {
        Cmd::Expand { target, a } => cmd_expand(&cfg, &ex, &target, a.as_deref()),
        Cmd::Ssp => cmd_ssp(&cfg, &ex),
        Cmd::Companion { form } => cmd_companion(&cfg, &ex, &form),
        Cmd::Filtration { form } => cmd_filtration(&cfg, &ex, &form),
        Cmd::Wronskian { forms } => cmd_wronskian(&cfg, &ex, &forms),
        Cmd::Verify { theorem } => cmd_verify(&cfg, &ex, theorem),
    }
}

// ---------------------------------------------------------------------------
// Target resolution
// ---------------------------------------------------------------------------

/// Resolve an expansion target to a u-series.
fn resolve_series(ex: &Expander, target: &str, a_flag: Option<&str>) -> Result<KSeries, Error> {
    let fq = ex.fq();
    match target {
        "g" => return Ok(ex.g_series()?.clone()),
        "h" => return Ok(ex.h_series()?.clone()),
        "E" => return Ok(ex.e_series()?.clone()),
        _ => {}
    }
    if let Some(d) = target.strip_prefix("g_") {
        let d: u32 = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad Eisenstein index in '{target}'")))?;
        if d == 0 {
            return Err(Error::InvalidArgument("g_d needs d >= 1".into()));
        }
        return ex.gk_series(d);
    }
    if target == "u_a" || target.starts_with("u_a:") {
        let a_text = match (target.strip_prefix("u_a:"), a_flag) {
            (Some(t), _) if !t.is_empty() => t,
            (_, Some(t)) => t,
            _ => {
                return Err(Error::InvalidArgument(
                    "u_a needs a polynomial: u_a:<poly> or --a <poly>".into(),
                ))
            }
        };
        let a = parse_poly(fq, a_text)?;
        return ex.u_sub_a(&a);
    }
    if let Some(text) = target.strip_prefix("form:") {
        return ex.expand(&parse_form(fq, text)?);
    }
    Err(Error::Parse(format!(
        "unknown expansion target '{target}' (expected g, h, E, g_<d>, u_a, form:<expr>)"
    )))
}

/// Resolve a form argument: the named generators, an Eisenstein series
/// g_<d>, or an expression in g and h.
fn resolve_form(ex: &Expander, text: &str) -> Result<Form, Error> {
    let fq = ex.fq();
    match text {
        "g" => return Ok(Form::g(fq)),
        "h" => return Ok(Form::h(fq)),
        _ => {}
    }
    if let Some(d) = text.strip_prefix("g_") {
        if let Ok(d) = d.parse::<u32>() {
            if d == 0 {
                return Err(Error::InvalidArgument("g_d needs d >= 1".into()));
            }
            return ex.g_d_form(d);
        }
    }
    let text = text.strip_prefix("form:").unwrap_or(text);
    parse_form(fq, text)
}

// ---------------------------------------------------------------------------
// expand
// ---------------------------------------------------------------------------

fn cmd_expand(cfg: &Config, ex: &Expander, target: &str, a: Option<&str>) -> anyhow::Result<u8> {
    let series = resolve_series(ex, target, a)?;
    let text = series.to_text(ex.kf());
    if cfg.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": cfg.fq.q(),
                "prec": series.prec(),
                "target": target,
                "series": text,
            }))?
        );
    } else {
        println!("{text}");
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// ssp
// ---------------------------------------------------------------------------

struct SspOutcome {
    pi: String,
    s_text: String,
    degree: usize,
    x_divides: bool,
    oracle: Option<(usize, bool, Vec<String>)>,
}

fn ssp_at(cfg: &Config, ex: &Expander, pi: &Poly) -> anyhow::Result<SspOutcome> {
    let ctx = PrimeContext::new(&cfg.fq, pi.clone())?;
    let res = ctx.res();
    let s = ctx.ss_poly(ex)?;
    let degree = s.deg().expect("supersingular polynomial is monic, hence nonzero");
    let x_divides = s
        .divisible_by(res, &drinfeld::xpoly::XPoly::x(res))
        .expect("division by x is always defined");
    let oracle = if cfg.oracle {
        let brute = ctx.ss_poly_bruteforce()?;
        let quad = QuadField::new(res.clone())?;
        let mut js: Vec<String> =
            ctx.ss_bruteforce()?.iter().map(|j| quad.fmt_elem(j)).collect();
        js.sort();
        Some((js.len(), brute == s, js))
    } else {
        None
    };
    Ok(SspOutcome { pi: pi.to_text(), s_text: s.to_text(res, "x"), degree, x_divides, oracle })
}

fn cmd_ssp(cfg: &Config, ex: &Expander) -> anyhow::Result<u8> {
    let primes = cfg.primes()?;
    let outcomes = for_each_prime(&primes, |pi| ssp_at(cfg, ex, pi))?;
    let mut all_match = true;
    if cfg.json {
        let items: Vec<_> = outcomes
            .iter()
            .map(|o| {
                let mut obj = json!({
                    "pi": o.pi,
                    "ss": o.s_text,
                    "degree": o.degree,
                    "x_divides": o.x_divides,
                });
                if let Some((count, matches, js)) = &o.oracle {
                    obj["oracle"] = json!({
                        "supersingular_count": count,
                        "matches": matches,
                        "j_invariants": js,
                    });
                }
                obj
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": cfg.fq.q(),
                "results": items,
            }))?
        );
    }
    for o in &outcomes {
        if !cfg.json {
            println!("pi = {}", o.pi);
            println!("S_pi(x) = {}", o.s_text);
            println!("degree = {} ; x divides S: {}", o.degree, o.x_divides);
            if let Some((count, matches, js)) = &o.oracle {
                println!("oracle: {count} supersingular j-invariants, match = {matches}");
                println!("j-invariants: {}", js.join(", "));
            }
            println!();
        }
        if let Some((_, matches, _)) = &o.oracle {
            all_match &= matches;
        }
    }
    Ok(if all_match { 0 } else { 1 })
}

// ---------------------------------------------------------------------------
// companion
// ---------------------------------------------------------------------------

fn cmd_companion(cfg: &Config, ex: &Expander, form: &str) -> anyhow::Result<u8> {
    let f = resolve_form(ex, form)?;
    let cp = companion(&cfg.fq, &f)?;
    let p_text = cp.poly.to_text(ex.kf(), "x");
    // Reduction at each requested prime, if any.
    let mut reduced: Vec<(String, String)> = Vec::new();
    if cfg.pi.is_some() || cfg.sweep.is_some() {
        for pi in cfg.primes()? {
            let ctx = PrimeContext::new(&cfg.fq, pi.clone())?;
            let pbar = ctx.reduce_xpoly(&cp.poly)?;
            reduced.push((pi.to_text(), pbar.to_text(ctx.res(), "x")));
        }
    }
    if cfg.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": cfg.fq.q(),
                "form": f.to_text(&cfg.fq),
                "weight": cp.k,
                "type": cp.l,
                "mu": cp.mu,
                "gamma": cp.gamma,
                "companion": p_text,
                "reduced": reduced.iter().map(|(pi, s)| json!({"pi": pi, "companion": s})).collect::<Vec<_>>(),
            }))?
        );
    } else {
        println!("P(f, x) = {p_text}");
        println!(
            "weight = {}, type = {}, mu = {}, gamma = {}",
            cp.k, cp.l, cp.mu, cp.gamma
        );
        for (pi, s) in &reduced {
            println!("P mod ({pi}) = {s}");
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// filtration
// ---------------------------------------------------------------------------

fn cmd_filtration(cfg: &Config, ex: &Expander, form: &str) -> anyhow::Result<u8> {
    let f = resolve_form(ex, form)?;
    let primes = cfg.primes()?;
    let outcomes = for_each_prime(&primes, |pi| {
        let ctx = PrimeContext::new(&cfg.fq, pi.clone())?;
        Ok((pi.to_text(), ctx.filtration(ex, &f)?))
    })?;
    if cfg.json {
        let items: Vec<_> = outcomes
            .iter()
            .map(|(pi, w)| match w {
                Filtration::Finite(w) => json!({"pi": pi, "filtration": w}),
                Filtration::MinusInfinity => {
                    json!({"pi": pi, "filtration": null, "vanishes": true})
                }
            })
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": cfg.fq.q(),
                "form": f.to_text(&cfg.fq),
                "weight": f.weight(),
                "type": f.type_l(),
                "results": items,
            }))?
        );
    } else {
        for (pi, w) in &outcomes {
            match w {
                Filtration::Finite(w) => println!("pi = {pi} ; filtration = {w}"),
                Filtration::MinusInfinity => println!("pi = {pi} ; filtration = -infinity"),
            }
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// wronskian
// ---------------------------------------------------------------------------

fn cmd_wronskian(cfg: &Config, ex: &Expander, forms: &[String]) -> anyhow::Result<u8> {
    let fq = &cfg.fq;
    let fs: Vec<Form> = forms
        .iter()
        .map(|t| resolve_form(ex, t))
        .collect::<Result<_, _>>()?;
    let expansions: Vec<KSeries> = fs.iter().map(|f| ex.expand(f)).collect::<Result<_, _>>()?;
    let series_w = wronskian_series(ex.alpha_table(), &expansions)?;
    let symbolic = if fs.len() as u64 <= fq.q() {
        Some(wronskian_serre(fq, &fs)?)
    } else {
        None
    };
    let agree = match &symbolic {
        Some(w) => Some(ex.expand(w)?.eq_series(ex.kf(), &series_w)),
        None => None,
    };
    let ord = series_w.ord(ex.kf());
    if cfg.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": fq.q(),
                "forms": fs.iter().map(|f| f.to_text(fq)).collect::<Vec<_>>(),
                "symbolic": symbolic.as_ref().map(|w| w.to_text(fq)),
                "series": series_w.to_text(ex.kf()),
                "ord_u": ord,
                "agree": agree,
            }))?
        );
    } else {
        if let Some(w) = &symbolic {
            println!("W_serre = {}", w.to_text(fq));
        }
        println!("W_series = {}", series_w.to_text(ex.kf()));
        println!("ord_u = {}", ord.map_or("none (zero window)".into(), |o| o.to_string()));
        if let Some(a) = agree {
            println!("agree = {a}");
        }
    }
    Ok(if agree == Some(false) { 1 } else { 0 })
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn cmd_verify(cfg: &Config, ex: &Expander, theorem: Theorem) -> anyhow::Result<u8> {
    let mut reports: Vec<VerifyReport> = Vec::new();
    if matches!(theorem, Theorem::Computation | Theorem::All) {
        reports.push(verify_theorem_computation(ex)?);
    }
    let needs_primes = !matches!(theorem, Theorem::Computation);
    if needs_primes {
        let primes = cfg.primes()?;
        let per_prime = for_each_prime(&primes, |pi| {
            let ctx = PrimeContext::new(&cfg.fq, pi.clone())?;
            let mut out = Vec::new();
            match theorem {
                Theorem::Ahlgrenono => out.push(verify_theorem_ahlgrenono(ex, &ctx)?),
                Theorem::Dww => out.push(dww_report(cfg, ex, &ctx)?),
                Theorem::CompanionProducts => out.push(companion_products_report(cfg, ex, &ctx)?),
                Theorem::All => {
                    if ctx.d() == 3 {
                        out.push(verify_theorem_ahlgrenono(ex, &ctx)?);
                    }
                    out.push(dww_report(cfg, ex, &ctx)?);
                    out.push(companion_products_report(cfg, ex, &ctx)?);
                }
                Theorem::Computation => unreachable!("computation is prime-independent"),
            }
            Ok(out)
        })?;
        reports.extend(per_prime.into_iter().flatten());
    }
    let passed = reports.iter().all(|r| r.passed());
    if cfg.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "schema": 1,
                "q": cfg.fq.q(),
                "passed": passed,
                "reports": reports,
            }))?
        );
    } else {
        for r in &reports {
            let place = match &r.pi {
                Some(pi) => format!(" at pi = {pi}"),
                None => String::new(),
            };
            println!("== {}{place}  [q = {}, prec = {}, {} ms]", r.statement, r.q, r.prec, r.elapsed_ms);
            for c in &r.checks {
                println!("  {} {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.witness);
            }
        }
        println!(
            "overall: {} ({} report{})",
            if passed { "PASS" } else { "FAIL" },
            reports.len(),
            if reports.len() == 1 { "" } else { "s" }
        );
    }
    Ok(if passed { 0 } else { 1 })
}

/// Filtration divisibility bound on g_d, g_d², and a deterministic sample
/// of random integral forms.
fn dww_report(cfg: &Config, ex: &Expander, ctx: &PrimeContext) -> anyhow::Result<VerifyReport> {
    let started = Instant::now();
    let fq = &cfg.fq;
    let gd = ex.g_d_form(ctx.d())?;
    let mut targets: Vec<(String, Form)> = vec![
        ("g_d".into(), gd.clone()),
        ("g_d^2".into(), gd.pow(fq, 2)),
    ];
    let mut rng = StdRng::seed_from_u64(prime_seed(ctx.pi()));
    let mut found = 0;
    while found < 20 {
        let f = random_integral_form(fq, &mut rng);
        if ctx.reduce_form(&f)?.is_zero() {
            continue; // filtration −∞: the bound does not apply
        }
        found += 1;
        targets.push((format!("random-{found} (k={}, l={})", f.weight(), f.type_l()), f));
    }
    let mut checks = Vec::new();
    for (name, f) in &targets {
        let rep = ctx.check_dww(ex, f)?;
        checks.push(CheckResult {
            name: format!("dww({name})"),
            passed: rep.passed,
            witness: format!(
                "k = {}, w = {}, alpha = {}, shift a = {}, remainder = {}",
                rep.weight, rep.filtration, rep.alpha, rep.shift, rep.remainder
            ),
        });
    }
    Ok(VerifyReport {
        statement: "filtration-divisibility".into(),
        q: fq.q(),
        pi: Some(ctx.pi().to_text()),
        prec: ex.prec(),
        elapsed_ms: started.elapsed().as_millis(),
        checks,
    })
}

/// Companion-polynomial product congruence on a family of forms covering
/// both branch parities, including γ(k, l) = q.
fn companion_products_report(
    cfg: &Config,
    ex: &Expander,
    ctx: &PrimeContext,
) -> anyhow::Result<VerifyReport> {
    let started = Instant::now();
    let fq = &cfg.fq;
    let g = Form::g(fq);
    let h = Form::h(fq);
    let mut targets: Vec<(String, Form)> = vec![
        ("1".into(), Form::one(fq)),
        ("g".into(), g.clone()),
        ("h".into(), h.clone()),
        (format!("g^{}", fq.q()), g.pow(fq, fq.q())),
        ("h^2".into(), h.pow(fq, 2)),
        ("g*h".into(), g.mul(fq, &h)),
    ];
    let mut rng = StdRng::seed_from_u64(prime_seed(ctx.pi()) ^ 0x636f6d70);
    for i in 0..4 {
        let f = random_integral_form(fq, &mut rng);
        targets.push((format!("random-{} (k={}, l={})", i + 1, f.weight(), f.type_l()), f));
    }
    let mut checks = Vec::new();
    for (name, f) in &targets {
        let (_, gamma) = mu_gamma(fq, f.weight(), f.type_l())?;
        let minus_x_branch = ctx.d() % 2 == 1 && gamma == fq.q() as i64;
        let passed = ctx.companion_product_congruence(ex, f)?;
        checks.push(CheckResult {
            name: format!("companion-product({name})"),
            passed,
            witness: format!(
                "gamma = {gamma}, branch = {}",
                if minus_x_branch { "-x * P(g_d) * P(f)" } else { "P(g_d) * P(f)" }
            ),
        });
    }
    Ok(VerifyReport {
        statement: "companion-product-congruence".into(),
        q: fq.q(),
        pi: Some(ctx.pi().to_text()),
        prec: ex.prec(),
        elapsed_ms: started.elapsed().as_millis(),
        checks,
    })
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

/// Deterministic seed derived from π's coefficient vector.
fn prime_seed(pi: &Poly) -> u64 {
    pi.coeffs()
        .iter()
        .fold(0xD21F_0001u64, |acc, &c| acc.wrapping_mul(0x100000001b3).wrapping_add(c))
}

/// A random isobaric form with coefficients in A = F_q[T] (hence
/// π-integral at every prime): pick a grade from a random monomial, then
/// fill a random subset of its monomial basis with random small
/// polynomials.
fn random_integral_form(fq: &Fq, rng: &mut StdRng) -> Form {
    loop {
        let a0 = rng.gen_range(0..6i64);
        let b0 = rng.gen_range(0..6i64);
        let k = monomial_weight(fq, a0, b0);
        let basis = monomial_basis(fq, k, b0);
        let mut terms = Vec::new();
        for &(a, b) in &basis {
            if rng.gen_bool(0.6) {
                let coeffs: Vec<u64> = (0..3).map(|_| rng.gen_range(0..fq.q())).collect();
                let c = Poly::from_coeffs(coeffs);
                if !c.is_zero() {
                    terms.push((a, b, Rat::from_poly(c)));
                }
            }
        }
        if terms.is_empty() {
            continue;
        }
        return Form::new(fq, k, b0, terms).expect("basis monomials share the grade");
    }
}

/// Run a job once per prime on scoped worker threads; results come back in
/// input order, and the first error (in input order) wins.
fn for_each_prime<T: Send>(
    primes: &[Poly],
    job: impl Fn(&Poly) -> anyhow::Result<T> + Sync,
) -> anyhow::Result<Vec<T>> {
    let job = &job;
    let results: Vec<anyhow::Result<T>> = std::thread::scope(|s| {
        let handles: Vec<_> = primes.iter().map(|pi| s.spawn(move || job(pi))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("prime worker panicked"))
            .collect()
    });
    results.into_iter().collect()
}
