//! One function per subcommand. Each writes its records through the emitter
//! and reports whether the property it checks held.

use std::fs;
use std::path::Path;

use necklace_core::eulerprod::{euler_expand, euler_invert, PolySeries};
use necklace_core::exactmath::{mobius, Poly, Rat, Sign};
use necklace_core::groups::{
    auto_chain, chain_factorize, mobius_via_chain, preset, CayleyTable, FiniteGroup, NormalChain,
    SubgroupLattice,
};
use necklace_core::higher::{
    balanced_expansion, euler_char, eval_at_zeta_p, m_dn_at_zeta, m_dn_with_budget, Field,
};
use necklace_core::json::rat_to_string;
use necklace_core::necklace::{
    cyclotomic_factors, difference_vanishes, local_factor_check, necklace_factors, necklace_m,
    necklace_s, phi_minus_one_divisibility, primewise_congruent, trace_m_at_zeta, Checkpoint,
    ConjectureRun,
};
use necklace_core::systems::{
    is_primitive, is_system, search_primitive, system_to_minimal_d, NecklaceSystem,
};
use necklace_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde_json::{json, Map, Value};

use crate::emit::Emitter;
use crate::{Command, FieldArg, RunConfig, SignArg, Status};

pub fn run(command: &Command, config: &RunConfig, out: &mut Emitter) -> Result<Status> {
    match command {
        Command::Md { ds } => md(ds, out),
        Command::Factors { ds, poly } => factors(ds, poly.as_deref(), out),
        Command::VerifyConjecture {
            m_max,
            d_max,
            shard_size,
            checkpoint,
        } => verify(*m_max, *d_max, *shard_size, checkpoint.as_deref(), out),
        Command::Trace { ds, ms } => trace(ds, ms, out),
        Command::Systems {
            m,
            signed,
            max_size,
        } => systems(*m, *signed, *max_size, config, out),
        Command::MinimalD {
            m,
            signed,
            residues,
        } => minimal_d(*m, *signed, residues, config, out),
        Command::Group {
            preset,
            table,
            chain,
            base,
        } => group(
            preset.as_deref(),
            table.as_deref(),
            chain,
            *base,
            config,
            out,
        ),
        Command::EulerInvert { input, geometric } => invert(input.as_deref(), *geometric, out),
        Command::EulerExpand { input, order } => expand(input, *order, out),
        Command::Higher { n, d_max, zeta } => higher(*n, *d_max, *zeta, config, out),
        Command::EulerChar { n, d_max, field } => euler_chars(*n, *d_max, *field, out),
        Command::Balanced { n, base } => balanced(*n, *base, out),
        Command::PhiCheck { m, d } => phi_check(*m, *d, out),
        Command::Local { d, m, l, j } => local(*d, *m, *l, *j, out),
        Command::Primewise { d, e, m, sign } => primewise(*d, *e, *m, *sign, out),
    }
}

fn emit(out: &mut Emitter, record: Value) -> Result<()> {
    out.emit(&record).map_err(Error::from)
}

fn to_value<T: serde::Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(Error::from)
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn sign_of(arg: SignArg) -> Sign {
    match arg {
        SignArg::Minus => Sign::Minus,
        SignArg::Plus => Sign::Plus,
    }
}

fn md(ds: &[u64], out: &mut Emitter) -> Result<Status> {
    for &d in ds {
        emit(
            out,
            json!({ "d": d, "s": to_value(&necklace_s(d)?)?, "m": to_value(&necklace_m(d)?)? }),
        )?;
    }
    Ok(Status::Holds)
}

fn factors(ds: &[u64], poly: Option<&Path>, out: &mut Emitter) -> Result<Status> {
    if let Some(path) = poly {
        let f: Poly = read_json(path)?;
        emit(out, to_value(&cyclotomic_factors(&f)?)?)?;
        return Ok(Status::Holds);
    }
    if ds.is_empty() {
        return Err(Error::Parse("give --d or --poly".into()));
    }
    for &d in ds {
        emit(out, to_value(&necklace_factors(d)?)?)?;
    }
    Ok(Status::Holds)
}

fn verify(
    m_max: u64,
    d_max: u64,
    shard_size: u64,
    checkpoint: Option<&Path>,
    out: &mut Emitter,
) -> Result<Status> {
    let saved = match checkpoint {
        Some(path) => Checkpoint::load(path)?,
        None => None,
    };
    let run = match saved {
        Some(cp) if cp.m_max == m_max && cp.d_max == d_max => ConjectureRun::resume(cp)?,
        Some(cp) => {
            return Err(Error::Parse(format!(
                "checkpoint is for m_max = {}, d_max = {}",
                cp.m_max, cp.d_max
            )))
        }
        None => ConjectureRun::new(m_max, d_max)?,
    }
    .with_shard_size(shard_size)?;
    let last = run.run(|record, state| {
        if let Some(path) = checkpoint {
            state.save(path)?;
        }
        emit(out, json!({ "shard": to_value(record)? }))
    })?;
    emit(
        out,
        json!({
            "m_max": last.m_max,
            "d_max": last.d_max,
            "pairs_checked": last.pairs_checked,
            "counterexamples": to_value(&last.counterexamples)?,
        }),
    )?;
    Ok(Status::from_bool(last.counterexamples.is_empty()))
}

fn trace(ds: &[u64], ms: &[u64], out: &mut Emitter) -> Result<Status> {
    let mut status = Status::Holds;
    for &d in ds {
        for &m in ms {
            let value = trace_m_at_zeta(d, m)?;
            let formula = if d > 0 && m % d == 0 {
                mobius(m / d)? as i64
            } else {
                0
            };
            let agrees = value == Rat::from_integer(formula.into());
            status = status.and(Status::from_bool(agrees));
            emit(
                out,
                json!({ "d": d, "m": m, "trace": rat_to_string(&value), "formula": formula, "agrees": agrees }),
            )?;
        }
    }
    Ok(status)
}

fn systems(
    m: u64,
    signed: bool,
    max_size: usize,
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<Status> {
    let found = search_primitive(m, signed, max_size)?;
    let mut minimal = Map::new();
    let mut status = Status::Holds;
    for s in &found {
        let key = s
            .residues
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",");
        let entry = match system_to_minimal_d(s, config.prime_cutoff) {
            Ok(md) => {
                status = status.and(Status::from_bool(md.divides && md.minimal));
                to_value(&md)?
            }
            Err(e) => json!({ "error": e.to_string() }),
        };
        minimal.insert(key, entry);
    }
    let residues: Vec<&Vec<u64>> = found.iter().map(|s| &s.residues).collect();
    emit(
        out,
        json!({ "m": m, "signed": signed, "systems": residues, "minimal_d": minimal }),
    )?;
    Ok(status)
}

fn minimal_d(
    m: u64,
    signed: bool,
    residues: &[u64],
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<Status> {
    let s = NecklaceSystem::new(m, signed, residues)?;
    if !is_system(&s)? {
        return Err(Error::InvalidSystem(format!(
            "{residues:?} is not a necklace system mod {}",
            s.modulus()
        )));
    }
    let md = system_to_minimal_d(&s, config.prime_cutoff)?;
    let primitive = is_primitive(&s)?;
    let mut record = to_value(&md)?;
    record["m"] = json!(m);
    record["signed"] = json!(signed);
    record["residues"] = json!(s.residues);
    record["primitive"] = json!(primitive);
    let ok = md.divides && (md.minimal || !primitive);
    emit(out, record)?;
    Ok(Status::from_bool(ok))
}

fn load_group(
    preset_name: Option<&str>,
    table: Option<&Path>,
    config: &RunConfig,
) -> Result<FiniteGroup> {
    let limit = config.max_group_order as usize;
    match (preset_name, table) {
        (Some(name), None) => {
            let g = preset(name)?;
            if g.order() > limit {
                return Err(Error::BudgetExceeded {
                    what: "group order",
                    requested: g.order() as u64,
                    limit: limit as u64,
                });
            }
            Ok(g)
        }
        (None, Some(path)) => {
            let c: CayleyTable = read_json(path)?;
            if c.order != c.table.len() {
                return Err(Error::InvalidCayleyTable(format!(
                    "order {} but {} rows",
                    c.order,
                    c.table.len()
                )));
            }
            FiniteGroup::from_table_bounded(c.table, c.name, limit)
        }
        _ => Err(Error::Parse(
            "give exactly one of --preset or --table".into(),
        )),
    }
}

fn group(
    preset_name: Option<&str>,
    table: Option<&Path>,
    chain: &[u64],
    base: u64,
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<Status> {
    let g = load_group(preset_name, table, config)?;
    let lattice = SubgroupLattice::new(&g);
    let chain = if chain.is_empty() {
        auto_chain(&g, base)?
    } else {
        Some(NormalChain::new(&g, chain.to_vec())?)
    };
    let mut record = json!({
        "name": g.name(),
        "order": g.order(),
        "subgroups": lattice.len(),
        "mu": lattice.mobius(g.full_mask())?,
        "s": to_value(&lattice.s_g())?,
        "m": to_value(&lattice.m_g())?,
    });
    let mut status = Status::Holds;
    if let Some(chain) = chain {
        let f = chain_factorize(&g, &chain)?;
        let mu = mobius_via_chain(&g, &chain)?;
        status = Status::from_bool(f.verified && mu.agrees());
        record["chain"] = json!({
            "subgroups": chain.subgroups(),
            "primes": chain.primes(),
            "counts": chain.counts(),
            "stable": chain.is_stable(),
            "operator": to_value(&f.operator)?,
            "operator_text": f.operator.to_string(),
            "from_chain": to_value(&f.from_chain)?,
            "verified": f.verified,
            "mu_formula": mu.formula,
            "mu_lattice": mu.lattice,
        });
    } else {
        record["chain"] = Value::Null;
    }
    emit(out, record)?;
    Ok(status)
}

fn invert(input: Option<&Path>, geometric: Option<u64>, out: &mut Emitter) -> Result<Status> {
    let series = match (input, geometric) {
        (Some(path), None) => read_json::<PolySeries>(path)?,
        (None, Some(order)) => PolySeries::geometric_x(order),
        _ => {
            return Err(Error::Parse(
                "give exactly one of --input or --geometric".into(),
            ))
        }
    };
    emit(out, to_value(&euler_invert(&series)?)?)?;
    Ok(Status::Holds)
}

fn expand(input: &Path, order: Option<u64>, out: &mut Emitter) -> Result<Status> {
    let b: Vec<Poly> = read_json(input)?;
    let order = order.unwrap_or(b.len() as u64);
    emit(out, to_value(&euler_expand(&b, order)?)?)?;
    Ok(Status::Holds)
}

fn higher(
    n: u64,
    d_max: u64,
    zeta: Option<u64>,
    config: &RunConfig,
    out: &mut Emitter,
) -> Result<Status> {
    if d_max == 0 {
        return Err(Error::NonPositive { what: "d_max" });
    }
    match zeta {
        None => {
            for (i, m) in m_dn_with_budget(d_max, n, config.degree_budget)?
                .iter()
                .enumerate()
            {
                emit(out, json!({ "d": i + 1, "n": n, "value": to_value(m)? }))?;
            }
            Ok(Status::Holds)
        }
        Some(m) => {
            let values = m_dn_at_zeta(d_max, n, m)?;
            let closed_form_applies =
                balanced_expansion(n, m).is_some() && necklace_core::exactmath::is_prime(m);
            let mut status = Status::Holds;
            for (i, v) in values.iter().enumerate() {
                let d = i as u64 + 1;
                let mut record = json!({ "d": d, "n": n, "zeta": m, "value": to_value(v)? });
                if closed_form_applies {
                    let closed = eval_at_zeta_p(d, n, m)?;
                    let agrees = *v == Poly::constant(closed.clone());
                    status = status.and(Status::from_bool(agrees));
                    record["closed_form"] = json!(rat_to_string(&closed));
                    record["agrees"] = json!(agrees);
                }
                emit(out, record)?;
            }
            Ok(status)
        }
    }
}

fn euler_chars(n: u64, d_max: u64, field: FieldArg, out: &mut Emitter) -> Result<Status> {
    let (field, label) = match field {
        FieldArg::Real => (Field::Real, "R"),
        FieldArg::Complex => (Field::Complex, "C"),
    };
    for d in 1..=d_max {
        emit(
            out,
            json!({ "d": d, "n": n, "field": label, "value": euler_char(d, n, field)? }),
        )?;
    }
    Ok(Status::Holds)
}

fn balanced(n: u64, base: u64, out: &mut Emitter) -> Result<Status> {
    if base < 2 {
        return Err(Error::Parse("base must be at least 2".into()));
    }
    let record = match balanced_expansion(n, base) {
        Some(e) => {
            let coeffs: Vec<(u32, i64)> = e.coeffs.iter().map(|(&k, &c)| (k, c)).collect();
            json!({
                "n": n,
                "base": base,
                "balanced": true,
                "coeffs": coeffs,
                "full_digits": e.full_digits,
                "expression": e.alternating_string(),
            })
        }
        None => json!({ "n": n, "base": base, "balanced": false }),
    };
    emit(out, record)?;
    Ok(Status::Holds)
}

fn phi_check(m: u64, d: u64, out: &mut Emitter) -> Result<Status> {
    let divides = phi_minus_one_divisibility(m, d)?;
    emit(out, json!({ "m": m, "d": d, "divides": divides }))?;
    Ok(Status::from_bool(divides))
}

fn local(d: u64, m: u64, l: Option<u64>, j: u32, out: &mut Emitter) -> Result<Status> {
    if m == 0 {
        return Err(Error::NonPositive { what: "m" });
    }
    let reduced = necklace_s(d)?.reduce_mod_xm(m, Sign::Minus);
    let mut record = json!({ "d": d, "m": m, "reduced": to_value(&reduced)? });
    if let Some(l) = l {
        record["l"] = json!(l);
        record["j"] = json!(j);
        record["divisible"] = json!(local_factor_check(d, m, l, j)?);
    }
    emit(out, record)?;
    Ok(Status::Holds)
}

fn primewise(d: u64, e: u64, m: u64, sign: SignArg, out: &mut Emitter) -> Result<Status> {
    let sign = sign_of(sign);
    let modulus = match sign {
        Sign::Minus => m,
        Sign::Plus => 2 * m,
    };
    let congruent = primewise_congruent(d, e, modulus)?;
    let vanishes = difference_vanishes(d, e, m, sign)?;
    emit(
        out,
        json!({
            "d": d,
            "e": e,
            "m": m,
            "sign": sign.symbol().to_string(),
            "congruent": congruent,
            "difference_vanishes": vanishes,
        }),
    )?;
    Ok(Status::from_bool(!congruent || vanishes))
}
