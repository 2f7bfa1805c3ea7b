mod codec;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Deserialize;
use serde_json::{json, Value};

use codec::{int, int_mat, parse, poly, rat, rat_mat, rat_poly, MatrixIn, ModuleIn, Num, PolyIn, Result};
use weilkit::counting::{
    brute_force_n1, count_lattice_classes, count_tau0, count_tau1, count_totally_real_rank1,
    enumerate_stable_lattices, enumerate_totally_real_rank1, isogeny_atlas, totally_real_formula,
    totally_real_point_counts, zeta_from_counts, zeta_series, counts_from_zeta, CountingInstance, N1Involution,
    RealConvention,
};
use weilkit::deligne::{hensel_split_mod_pk, positivity_check, real_fixed_module, viability_search_n1};
use weilkit::exact::is_square;
use weilkit::involutions::{
    h1_classes, h1_enumerate, h1_size, normalize_involution_q, normalize_involution_z, random_sp_element, s_form,
};
use weilkit::symplectic::{
    companion, darboux_basis, gsp_multiplier, q_inversive_from_pair, siegel_reduce_int, signature_profile,
    QInversive, Ring,
};
use weilkit::weil::{
    enumerate_ordinary_real_weil, from_real_counterpart, is_ordinary, is_q_palindromic, is_weil_q_polynomial,
    real_counterpart, GuardConfig,
};
use weilkit::Error;

#[derive(Parser)]
#[command(name = "weilkit", version, about = "Exact computations with Weil q-polynomials and Deligne modules")]
struct Cli {
    /// Pretty-print the JSON result.
    #[arg(long, global = true)]
    pretty: bool,
    /// Seed for sampled output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for enumeration.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum RingArg {
    Z,
    Q,
}

#[derive(Subcommand)]
enum Command {
    /// Palindromic, Weil and ordinary predicates for a polynomial.
    WeilCheck { #[arg(long)] q: BigInt, payload: String },
    /// Real counterpart h of p, or p from h with --inverse.
    WeilConvert { #[arg(long)] q: BigInt, #[arg(long)] inverse: bool, payload: String },
    /// Ordinary real Weil polynomials of degree n.
    WeilEnum { #[arg(long)] q: BigInt, #[arg(long)] n: usize },
    /// Symplectic companion matrix of an ordinary Weil polynomial.
    Companion { #[arg(long)] q: BigInt, payload: String },
    /// q-inversive element from {"A", "C"}.
    QinvBuild { #[arg(long)] q: BigInt, payload: String },
    /// Whether a matrix is q-inversive.
    QinvCheck { #[arg(long)] q: BigInt, payload: String },
    /// Signatures of C on the eigenlines of A, from {"A", "C"}.
    SigProfile { payload: String },
    /// Darboux basis of an antisymmetric Gram matrix.
    Darboux { #[arg(long, value_enum, default_value = "z")] ring: RingArg, payload: String },
    /// Integral symplectic g with g v = e1, from {"v": [...]}.
    Siegel { payload: String },
    /// Normal form of a symplectic involution.
    InvolutionClassify { payload: String },
    /// Classes of integral involutions with multiplier -1.
    H1 {
        #[arg(long)]
        n: usize,
        /// List the class representatives.
        #[arg(long)]
        list: bool,
        /// Add a seeded random Sp(2n, Z) conjugate of each representative.
        #[arg(long)]
        sample: bool,
    },
    /// Validation report of a module bundle.
    ValidateDeligne { payload: String },
    /// Positivity of omega(x, iota y); searches a certificate for n = 1 when iota is absent.
    Positivity { payload: String },
    /// The tau-fixed totally real module.
    FixedModule { payload: String },
    /// Unit-root splitting modulo p^k.
    HenselSplit { #[arg(long)] k: u32, payload: String },
    /// Closed-form n = 1 counts.
    CountN1 { #[arg(long)] q: BigInt, #[arg(long = "B", allow_hyphen_values = true)] b: BigInt },
    /// Brute-force n = 1 solutions with certificate signs.
    OracleN1 { #[arg(long)] q: BigInt, #[arg(long = "B", allow_hyphen_values = true)] b: BigInt },
    /// Lattice-class count with the stable-lattice oracle.
    CountLattices {
        #[arg(long)]
        q: BigInt,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: BigInt,
        /// Oracle bound, defaults to |D|.
        #[arg(long)]
        bound: Option<BigInt>,
    },
    /// Totally real rank-1 counts under both conventions.
    CountRealN1 { #[arg(long)] q: BigInt },
    /// Zeta series ((1 - T) / (1 - sqrt(q) T))^2.
    Zeta { #[arg(long)] q: BigInt, #[arg(long, default_value_t = 8)] terms: usize },
    /// Isogeny-class atlas.
    Atlas { #[arg(long)] q: BigInt, #[arg(long)] n: usize },
}

impl Command {
    fn payload(&self) -> Option<&str> {
        use Command::*;
        match self {
            WeilCheck { payload, .. }
            | WeilConvert { payload, .. }
            | Companion { payload, .. }
            | QinvBuild { payload, .. }
            | QinvCheck { payload, .. }
            | SigProfile { payload }
            | Darboux { payload, .. }
            | Siegel { payload }
            | InvolutionClassify { payload }
            | ValidateDeligne { payload }
            | Positivity { payload }
            | FixedModule { payload }
            | HenselSplit { payload, .. } => Some(payload),
            _ => None,
        }
    }
}

/// Result JSON and whether the predicate it reports holds.
struct Outcome {
    value: Value,
    ok: bool,
}

fn done(value: Value) -> Result<Outcome> {
    Ok(Outcome { value, ok: true })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairIn {
    #[serde(rename = "A")]
    a: MatrixIn,
    #[serde(rename = "C")]
    c: MatrixIn,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorIn {
    v: Vec<Num>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PositivityIn {
    module: ModuleIn,
    #[serde(default)]
    iota: Option<PolyIn>,
}

fn qinv_json(g: &QInversive) -> Value {
    json!({
        "gamma": rat_mat(g.gamma()),
        "A": rat_mat(g.a()),
        "B": rat_mat(g.b()),
        "C": rat_mat(g.c()),
    })
}

fn guard() -> Result<GuardConfig> {
    match std::env::var("WEILKIT_GUARD") {
        Ok(overrides) => GuardConfig::default().parse_overrides(&overrides),
        Err(_) => Ok(GuardConfig::default()),
    }
}

fn run(cli: &Cli, text: Option<&str>) -> Result<Outcome> {
    let text = || text.expect("payload read for payload commands");
    match &cli.command {
        Command::WeilCheck { q, .. } => {
            let p = parse::<PolyIn>(text())?.int()?;
            let palindromic = is_q_palindromic(&p, q)?;
            let weil = palindromic && is_weil_q_polynomial(&p, q).unwrap_or(false);
            let ordinary = weil && is_ordinary(&p, q);
            Ok(Outcome { value: json!({"palindromic": palindromic, "weil": weil, "ordinary": ordinary}), ok: weil })
        }
        Command::WeilConvert { q, inverse, .. } => {
            let input = parse::<PolyIn>(text())?.int()?;
            if *inverse {
                done(json!({"p": poly(&from_real_counterpart(&input, q)?)}))
            } else {
                done(json!({"h": poly(&real_counterpart(&input, q)?)}))
            }
        }
        Command::WeilEnum { q, n } => {
            let hs = enumerate_ordinary_real_weil(*n, q, &guard()?)?;
            done(json!({"count": hs.len(), "h": hs.iter().map(poly).collect::<Vec<_>>()}))
        }
        Command::Companion { q, .. } => {
            let p = parse::<PolyIn>(text())?.int()?;
            done(qinv_json(&companion(&p, q)?))
        }
        Command::QinvBuild { q, .. } => {
            let pair = parse::<PairIn>(text())?;
            done(qinv_json(&q_inversive_from_pair(&pair.a.rat()?, &pair.c.rat()?, q)?))
        }
        Command::QinvCheck { q, .. } => {
            let g = parse::<MatrixIn>(text())?.rat()?;
            match QInversive::from_matrix(&g, q) {
                Ok(_) => done(json!({"q_inversive": true})),
                Err(Error::Precondition(reason) | Error::NotSimilitude(reason)) => {
                    Ok(Outcome { value: json!({"q_inversive": false, "reason": reason}), ok: false })
                }
                Err(e) => Err(e),
            }
        }
        Command::SigProfile { .. } => {
            let pair = parse::<PairIn>(text())?;
            let profile = signature_profile(&pair.a.rat()?, &pair.c.rat()?)?;
            let entries: Vec<Value> = profile
                .entries
                .iter()
                .map(|e| json!({"minpoly": poly(&e.minpoly), "lo": rat(&e.lo), "hi": rat(&e.hi), "signature": e.signature}))
                .collect();
            done(json!({"entries": entries}))
        }
        Command::Darboux { ring, .. } => {
            let g = parse::<MatrixIn>(text())?.rat()?;
            let ring = match ring {
                RingArg::Z => Ring::Integer,
                RingArg::Q => Ring::Rational,
            };
            done(json!({"P": rat_mat(&darboux_basis(&g, ring)?)}))
        }
        Command::Siegel { .. } => {
            let v = parse::<VectorIn>(text())?.v.iter().map(Num::integer).collect::<Result<Vec<_>>>()?;
            done(json!({"g": int_mat(&siegel_reduce_int(&v)?)}))
        }
        Command::InvolutionClassify { .. } => {
            let tau = parse::<MatrixIn>(text())?.rat()?;
            let (g, class) = normalize_involution_q(&tau)?;
            let mut out = json!({"class": class, "g_q": rat_mat(g.mat())});
            if let (Some(t), -1) = (tau.to_int(), class.multiplier) {
                let z = normalize_involution_z(&t)?;
                out["class"] = serde_json::to_value(z.class).expect("serializable");
                out["g_z"] = int_mat(&z.g);
                out["S"] = int_mat(&z.s);
            }
            done(out)
        }
        Command::H1 { n, list, sample } => {
            let mut out = json!({"size": h1_size(*n)});
            if *list || *sample {
                let reps: Vec<Value> = h1_classes(*n)
                    .into_iter()
                    .zip(h1_enumerate(*n))
                    .enumerate()
                    .map(|(i, (class, s))| {
                        let mut entry = json!({"class": class, "S": int_mat(&s)});
                        if *sample {
                            let h = random_sp_element(*n, 12, cli.seed.wrapping_add(i as u64));
                            let hinv = h.to_rat().inverse().expect("symplectic").to_int().expect("integral");
                            entry["conjugate"] = int_mat(&(&(&h * &s_form(&s)) * &hinv));
                        }
                        entry
                    })
                    .collect();
                out["classes"] = Value::Array(reps);
            }
            done(out)
        }
        Command::ValidateDeligne { .. } => {
            let report = parse::<ModuleIn>(text())?.build()?.validate();
            let ok = report.passed();
            Ok(Outcome { value: json!({"valid": ok, "checks": report.checks}), ok })
        }
        Command::Positivity { .. } => {
            let input = parse::<PositivityIn>(text())?;
            let pr = input.module.build()?;
            match &input.iota {
                Some(iota) => {
                    let positive = positivity_check(&pr, &iota.rat()?)?;
                    Ok(Outcome { value: json!({"positive": positive}), ok: positive })
                }
                None => {
                    let g = QInversive::from_matrix(pr.base.f(), pr.base.ctx().q())?;
                    match viability_search_n1(&g)? {
                        Some(c) => done(json!({"positive": true, "iota": rat_poly(&c.iota), "R": rat_mat(&c.r)})),
                        None => Ok(Outcome { value: json!({"positive": false}), ok: false }),
                    }
                }
            }
        }
        Command::FixedModule { .. } => {
            let m = real_fixed_module(&parse::<ModuleIn>(text())?.build()?)?;
            let mut out = json!({"basis": rat_mat(&m.basis), "A": rat_mat(&m.a)});
            if let Some((n, alpha)) = &m.level {
                out["level"] = json!({"N": int(n), "alpha": int_mat(alpha), "valid": m.level_is_valid()});
            }
            done(out)
        }
        Command::HenselSplit { k, .. } => {
            let pr = parse::<ModuleIn>(text())?.build()?;
            let s = hensel_split_mod_pk(&pr.base, pr.tau.as_ref(), *k)?;
            done(json!({
                "modulus": int(&s.modulus),
                "rank": s.rank,
                "e": int_mat(&s.e),
                "complement": int_mat(&s.complement),
            }))
        }
        Command::CountN1 { q, b } => {
            let inst = CountingInstance::new(q, b)?;
            done(json!({
                "tau0": count_tau0(&inst)?,
                "tau1": count_tau1(&inst)?,
                "lattice": count_lattice_classes(&inst)?,
            }))
        }
        Command::OracleN1 { q, b } => {
            let inst = CountingInstance::new(q, b)?;
            let mut out = json!({"instance": inst});
            for (key, which, count) in [
                ("tau0", N1Involution::Tau0, count_tau0(&inst)?),
                ("tau1", N1Involution::Tau1, count_tau1(&inst)?),
            ] {
                let sols = brute_force_n1(&inst, which)?;
                let plus = sols.iter().filter(|s| s.sign == 1).count();
                out[key] = json!({
                    "count": count,
                    "solutions": sols.iter().map(|s| json!({"gamma": rat_mat(&s.gamma), "sign": s.sign})).collect::<Vec<_>>(),
                    "split": [plus, sols.len() - plus],
                });
            }
            let ok = out["tau0"]["solutions"].as_array().map(Vec::len) == Some(2 * count_tau0(&inst)? as usize)
                && out["tau1"]["solutions"].as_array().map(Vec::len) == Some(2 * count_tau1(&inst)? as usize);
            out["consistent"] = json!(ok);
            Ok(Outcome { value: out, ok })
        }
        Command::CountLattices { q, b, bound } => {
            let inst = CountingInstance::new(q, b)?;
            let bound = bound.clone().unwrap_or_else(|| num_traits::Signed::abs(&inst.d));
            let lattices = enumerate_stable_lattices(&inst, &bound)?;
            let count = count_lattice_classes(&inst)?;
            let ok = count == lattices.len() as u64;
            Ok(Outcome {
                value: json!({
                    "lattice": count,
                    "oracle": lattices.len(),
                    "bound": int(&bound),
                    "lattices": lattices.iter().map(|l| rat_mat(l.basis())).collect::<Vec<_>>(),
                }),
                ok,
            })
        }
        Command::CountRealN1 { q } => {
            let values = enumerate_totally_real_rank1(q)?;
            let mut out = json!({
                "positive": count_totally_real_rank1(q, RealConvention::Positive)?,
                "signed": count_totally_real_rank1(q, RealConvention::Signed)?,
                "values": values.iter().map(int).collect::<Vec<_>>(),
            });
            if is_square(q) {
                out["formula"] = int(&totally_real_formula(q)?);
            }
            done(out)
        }
        Command::Zeta { q, terms } => {
            let z = zeta_series(q, *terms)?;
            let counts = totally_real_point_counts(q, *terms)?;
            let ok = zeta_from_counts(&counts, *terms) == z;
            let extracted = counts_from_zeta(&z, *terms)?;
            Ok(Outcome {
                value: json!({
                    "series": rat_poly(&z),
                    "counts": extracted.iter().map(rat).collect::<Vec<_>>(),
                    "exp_log_agrees": ok,
                }),
                ok,
            })
        }
        Command::Atlas { q, n } => {
            let entries = isogeny_atlas(*n, q, &guard()?)?;
            let rows: Vec<Value> = entries
                .iter()
                .map(|e| {
                    let mut v = json!({
                        "h": poly(&e.h),
                        "p": poly(&e.p),
                        "gamma": rat_mat(e.gamma.gamma()),
                        "multiplier": gsp_multiplier(e.gamma.gamma()).map(|m| rat(&m)).unwrap_or(Value::Null),
                        "a_charpoly": rat_poly(&e.a_charpoly),
                        "a_relation": e.a_relation,
                    });
                    if let Some(c) = &e.certificate {
                        v["certificate"] = json!({"iota": rat_poly(&c.iota), "R": rat_mat(&c.r)});
                    }
                    v
                })
                .collect();
            done(json!({"count": rows.len(), "entries": rows}))
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid_input",
        Error::Dimension(_) => "dimension",
        Error::Singular => "singular",
        Error::NotPalindromic { .. } => "not_palindromic",
        Error::RealRoots => "real_roots",
        Error::Precondition(_) => "precondition",
        Error::NotSimilitude(_) => "not_similitude",
        Error::NotPrimitive(_) => "not_primitive",
        Error::GuardExceeded { .. } => "guard_exceeded",
        Error::Unsupported(_) => "unsupported",
        Error::NotImaginary => "not_imaginary",
        Error::NotOrdinary(_) => "not_ordinary",
        Error::Internal(_) => "internal",
    }
}

fn read_payload(arg: &str) -> Result<String> {
    if arg != "-" {
        return Ok(arg.to_string());
    }
    let mut s = String::new();
    std::io::stdin()
        .read_to_string(&mut s)
        .map_err(|e| Error::InvalidInput(format!("cannot read stdin: {e}")))?;
    Ok(s)
}

fn render(v: &Value, pretty: bool) -> String {
    if pretty {
        serde_json::to_string_pretty(v).expect("serializable")
    } else {
        v.to_string()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("{}", json!({"error": {"kind": "invalid_input", "message": e.to_string()}}));
            return ExitCode::from(2);
        }
    }
    let outcome = cli
        .command
        .payload()
        .map(read_payload)
        .transpose()
        .and_then(|text| run(&cli, text.as_deref()));
    match outcome {
        Ok(o) => {
            println!("{}", render(&o.value, cli.pretty));
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let code = match e {
                Error::InvalidInput(_) | Error::Dimension(_) => 2,
                _ => 1,
            };
            let err = json!({"error": {"kind": error_kind(&e), "message": e.to_string()}});
            eprintln!("{}", render(&err, cli.pretty));
            ExitCode::from(code)
        }
    }
}
