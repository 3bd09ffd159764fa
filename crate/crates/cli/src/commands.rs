use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use upcheck_automata::{Dfa, DEFAULT_STATE_CAP};
use upcheck_core::bounds::parse_certificates;
use upcheck_core::decider::{
    decide, oracle_membership, period_bound_report, CertificatePolicy, DecideConfig, Outcome,
};
use upcheck_core::langs::{congruence_dfa, gamma, DEFAULT_BERTRAND_CUTOFF, DEFAULT_LEARN_DEPTH};
use upcheck_core::reduce::{detect_merge_form, reduce_to_base};
use upcheck_core::{
    builtin, check_hypotheses, numeration_dfa, parse_system, LangSource, NumerationLanguage, NumerationSystem,
};
use upcheck_padic::{
    check_block_conjecture, direct_valuations, longest_zero_block, nu2_closed_form, toy_recurrence,
    toy_variant_recurrence, valuation_peaks, zeta_toy, Recurrence, Valuation,
};

use crate::args::{CertArgs, Command, Format, Global};
use crate::error::{CliError, Result};

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn system(g: &Global) -> Result<NumerationSystem> {
    let name = g
        .system
        .as_deref()
        .ok_or_else(|| CliError::Usage("this command needs --system".into()))?;
    if let Some(sys) = builtin(name) {
        return Ok(sys);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::Usage(format!("`{name}` is neither a built-in system nor a file")));
    }
    Ok(parse_system(&read(path)?)?)
}

fn load_dfa(path: &Path) -> Result<Dfa> {
    Ok(Dfa::from_text(&read(path)?)?)
}

fn language(g: &Global, sys: &NumerationSystem) -> Result<NumerationLanguage> {
    let source = match &g.lang {
        Some(path) => LangSource::User(load_dfa(path)?),
        None => LangSource::Auto,
    };
    Ok(numeration_dfa(sys, source)?)
}

/// Digits run together when all are below ten, dot-separated otherwise.
fn show_word(w: &[u32], alphabet: usize) -> String {
    let sep = if alphabet > 10 { "." } else { "" };
    w.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(sep)
}

fn parse_word(s: &str) -> Result<Vec<u32>> {
    let bad = || CliError::Usage(format!("bad digit word `{s}`"));
    if s.is_empty() || s == "-" {
        return Ok(Vec::new());
    }
    if s.contains('.') {
        s.split('.').map(|t| t.parse().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
    }
}

fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || CliError::Usage(format!("bad range `{s}`"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let (a, b) = if let Some((a, b)) = s.split_once("..") {
        (num(a)?, num(b.trim_start_matches('='))?)
    } else if let Some((a, b)) = s.split_once('-') {
        (num(a)?, num(b)?)
    } else {
        let i = num(s)?;
        (i, i)
    };
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn certificate_policy(c: &CertArgs) -> Result<CertificatePolicy> {
    Ok(match c.certs.as_str() {
        "auto" => CertificatePolicy::Auto,
        "none" => CertificatePolicy::None,
        path => CertificatePolicy::Given(parse_certificates(&read(Path::new(path))?)?),
    })
}

/// `key=value` lines in machine mode, `key: value` otherwise.
struct Out {
    format: Format,
    buf: String,
}

impl Out {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = match self.format {
            Format::Machine => writeln!(self.buf, "{key}={value}"),
            Format::Text => writeln!(self.buf, "{key}: {value}"),
        };
    }

    fn line(&mut self, s: impl std::fmt::Display) {
        let _ = writeln!(self.buf, "{s}");
    }
}

fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

pub fn run(g: &Global, cmd: &Command) -> Result<String> {
    let mut out = Out {
        format: g.format,
        buf: String::new(),
    };
    match cmd {
        Command::Seq { n } => {
            let sys = system(g)?;
            let terms = sys.extend_sequence(*n)?;
            out.line(terms.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" "));
        }
        Command::Rep { value, padded } => {
            let sys = system(g)?;
            let n: BigUint = value
                .parse()
                .map_err(|_| CliError::Usage(format!("not a non-negative integer: {value}")))?;
            let mut w = sys.greedy_rep(&n)?;
            if let Some(len) = padded {
                if *len > w.len() {
                    let mut p = vec![0; len - w.len()];
                    p.extend(w);
                    w = p;
                }
            }
            out.line(show_word(&w, sys.alphabet_bound() as usize));
        }
        Command::Val { word } => {
            let sys = system(g)?;
            let w = parse_word(word)?;
            out.line(sys.value_of(&w));
            if !sys.is_padded_greedy(&w) {
                eprintln!("note: not a (padded) greedy representation");
            }
        }
        Command::CheckHypotheses { c } => {
            let sys = system(g)?;
            let c = match c {
                Some(c) => *c,
                None => language(g, &sys)?.c(),
            };
            let h = check_hypotheses(&sys, g.horizon, Some(c))?;
            out.kv("horizon", h.horizon);
            out.kv("h2_verified_to", h.h2_verified_to);
            out.kv("G", opt(h.g));
            out.kv("G_source", format!("{:?}", h.g_source).to_lowercase());
            out.kv("h3", if h.h3_verified() { "verified-at-horizon" } else { "unverified" });
            out.kv("R", opt(h.r));
            out.kv("C", opt(h.c));
            out.kv("Z", opt(h.z));
        }
        Command::LangDfa { source } => {
            let sys = system(g)?;
            let src = match source.as_str() {
                "auto" => LangSource::Auto,
                "bertrand" => LangSource::Bertrand {
                    cutoff: DEFAULT_BERTRAND_CUTOFF,
                },
                "learn" => LangSource::Learn {
                    max_depth: DEFAULT_LEARN_DEPTH,
                },
                s => match s.strip_prefix("user:") {
                    Some(path) => LangSource::User(load_dfa(Path::new(path))?),
                    None => return Err(CliError::Usage(format!("unknown language source `{s}`"))),
                },
            };
            let l = numeration_dfa(&sys, src)?;
            out.line(format!("# provenance {}", l.provenance.as_str()));
            out.buf.push_str(&l.dfa.to_text());
        }
        Command::Congruence { q, r } => {
            let sys = system(g)?;
            let l = language(g, &sys)?;
            let d = congruence_dfa(&sys, *q, *r, &l, DEFAULT_STATE_CAP)?.minimize();
            out.buf.push_str(&d.to_text());
        }
        Command::Gamma { q } => {
            let sys = system(g)?;
            let l = language(g, &sys)?;
            out.line(gamma(&sys, *q, &l)?);
        }
        Command::Bounds { dfa, certs } => {
            let sys = system(g)?;
            let l = language(g, &sys)?;
            let cfg = DecideConfig {
                certificates: certificate_policy(certs)?,
                hypothesis_horizon: g.horizon,
                ..DecideConfig::default()
            };
            let report = period_bound_report(&sys, &load_dfa(dfa)?, &l, &cfg)?;
            out.buf.push_str(&report.to_text());
        }
        Command::Decide {
            dfa,
            certs,
            cap_period,
            cap_states,
        } => {
            if *cap_period == 0 || *cap_states == 0 {
                return Err(CliError::Usage("caps must be positive".into()));
            }
            let sys = system(g)?;
            let l = language(g, &sys)?;
            let cfg = DecideConfig {
                certificates: certificate_policy(certs)?,
                period_cap: *cap_period,
                state_cap: *cap_states,
                hypothesis_horizon: g.horizon,
                ..DecideConfig::default()
            };
            let v = decide(&sys, &load_dfa(dfa)?, &l, &cfg)?;
            match g.format {
                Format::Machine => out.buf.push_str(&v.to_machine()),
                Format::Text => {
                    out.kv("outcome", v.outcome.as_str());
                    if let Some(w) = &v.witness {
                        out.kv("witness", w);
                    }
                    if let Some(r) = &v.refutation {
                        out.kv("refutation", r);
                    }
                    let flags: Vec<&str> = v.flags.iter().map(|f| f.as_str()).collect();
                    out.kv("flags", if flags.is_empty() { "none".to_string() } else { flags.join(",") });
                    out.kv("states", v.states);
                    out.kv("candidates_tested", v.candidates_tested);
                    for c in &v.caps_hit {
                        out.kv("cap", c);
                    }
                }
            }
            out.kv("config.period_cap", cfg.period_cap);
            out.kv("config.state_cap", cfg.state_cap);
            out.kv("config.horizon", cfg.hypothesis_horizon);
            out.kv("config.certificates", &certs.certs);
            out.kv("config.language", l.provenance.as_str());
            if g.strict && v.outcome == Outcome::Inconclusive {
                print!("{}", out.buf);
                return Err(CliError::StrictInconclusive(v.caps_hit.join("; ")));
            }
        }
        Command::PadicVal { p, range, precision } => {
            let sys = system(g)?;
            let rec = Recurrence::new(sys.coeffs().to_vec(), sys.offset(), sys.initial().to_vec())?;
            let (a, b) = parse_range(range)?;
            for i in a..=b {
                let v = match rec.valuation(*p, i, *precision) {
                    Valuation::Exact(v) => v.to_string(),
                    Valuation::AtLeast(v) => format!(">={v}"),
                };
                out.line(format!("{i}\t{v}"));
            }
        }
        Command::Zeta { precision } => {
            let z = zeta_toy(*precision)?;
            match g.format {
                Format::Text => {
                    out.line(z.residue());
                    out.line(z.binary());
                }
                Format::Machine => {
                    out.kv("zeta", z.residue());
                    out.kv("binary", z.binary());
                    out.kv("precision", z.precision());
                }
            }
        }
        Command::CheckNu2 { max } => {
            if *max < 10 {
                return Err(CliError::Usage("--max must be at least 10".into()));
            }
            let zeta = zeta_toy(50)?;
            let direct = direct_valuations(&toy_recurrence(), 2, *max as usize);
            let mut bad = Vec::new();
            let mut unresolved = 0;
            for i in 10..=*max {
                match nu2_closed_form(i, zeta.as_padic()) {
                    Valuation::Exact(v) if v != direct[i as usize] => bad.push(i),
                    Valuation::Exact(_) => {}
                    Valuation::AtLeast(_) => unresolved += 1,
                }
            }
            out.kv("range", format!("10..{max}"));
            out.kv("mismatches", bad.len());
            out.kv("unresolved", unresolved);
            for i in bad {
                out.kv("mismatch", i);
            }
        }
        Command::Blocks { precision, limit } => {
            if *precision < *limit as u64 + 1 {
                return Err(CliError::Usage("--precision must exceed --limit".into()));
            }
            let z = zeta_toy(*precision)?;
            let table = upcheck_padic::block_lengths(z.as_padic());
            for a in [19usize, 304] {
                if a < table.len() {
                    out.kv(&format!("block_length({a})"), opt(table[a]));
                }
            }
            out.kv("longest_zero_block", longest_zero_block(z.as_padic(), *limit));
            let r = check_block_conjecture(z.as_padic(), *limit);
            out.kv("conjecture_checked", r.checked);
            out.kv("conjecture_violations", r.violations.len());
            out.kv("undetermined", r.undetermined.len());
            for (a, l) in r.violations {
                out.kv("violation", format!("{a} {l}"));
            }
        }
        Command::Peaks => {
            let mut pairs = vec![(67, 44), (2115, 1070), (10307, 5172)];
            if g.slow {
                pairs.extend([(534595, 267318), (2631747, 1315896)]);
            }
            let ok = valuation_peaks(&toy_variant_recurrence(), 2, &pairs);
            for ((i, nu), ok) in pairs.iter().zip(ok) {
                out.line(format!("{i}\t{nu}\t{}", if ok { "ok" } else { "FAIL" }));
            }
        }
        Command::Reduce { dfa } => {
            let sys = system(g)?;
            let l = language(g, &sys)?;
            let form = detect_merge_form(&sys, g.horizon)?
                .ok_or_else(|| CliError::Validation("system has no merge form within the horizon".into()))?;
            let d = reduce_to_base(&sys, &form, &load_dfa(dfa)?, &l)?;
            out.line(format!(
                "# b {} u {} N {} {}",
                form.b,
                form.u,
                form.n,
                if form.exact { "exact" } else { "horizon-verified" }
            ));
            out.buf.push_str(&d.to_text());
        }
        Command::Oracle { dfa, n, sample } => {
            let sys = system(g)?;
            let d = load_dfa(dfa)?;
            match sample {
                None => {
                    let bits = oracle_membership(&sys, &d, *n);
                    out.line(bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>());
                }
                Some(k) => {
                    let padded = d.pad_closure(0);
                    let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
                    for _ in 0..*k {
                        let v: u64 = rng.gen_range(0..1_000_000_000_000);
                        let w = sys.rep(v);
                        let hit = w.iter().all(|&x| (x as usize) < padded.alphabet()) && padded.accepts(&w);
                        out.line(format!("{v}\t{}", u8::from(hit)));
                    }
                }
            }
        }
    }
    Ok(out.buf)
}
