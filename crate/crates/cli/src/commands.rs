use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use almostfin::almostrep::{amplify, folner_build, tensor, verify, AlmostRep, VerificationReport};
use almostfin::carrier::{AlgebraElement, Carrier};
use almostfin::exactlin::{Field, Mat};
use almostfin::folner::{folner_scan, span, FinSubspace};
use almostfin::graphlab::{non_ibn_witness, paradoxical_pair, verify_pair};
use almostfin::pathology::{commutator_bound_check, rank_condition_audit, CommutatorReport, RankAudit};
use almostfin::rankradical::{rr_estimate, rr_monotonicity_report};
use almostfin::{ratio_string, Error, Ratio, Result};

use crate::config::{usage, Resolved};
use crate::{Command, Record};

fn ratio(r: Ratio) -> Value {
    Value::String(ratio_string(&r))
}

/// Accumulates one record; `wall_time_us` is stamped by [`Timed::finish`].
struct Timed {
    start: Instant,
    map: Map<String, Value>,
}

impl Timed {
    fn new(cmd: Command, params: Value) -> Timed {
        let mut map = Map::new();
        map.insert("command".into(), cmd.name().into());
        map.insert("params".into(), params);
        Timed { start: Instant::now(), map }
    }

    fn set(&mut self, k: &str, v: impl Into<Value>) -> &mut Self {
        self.map.insert(k.into(), v.into());
        self
    }

    fn finish(mut self, pass: bool) -> Record {
        self.map.insert("pass".into(), pass.into());
        self.map
            .insert("wall_time_us".into(), (self.start.elapsed().as_micros() as u64).into());
        Record(self.map)
    }
}

pub fn dispatch(cmd: Command, r: &Resolved) -> Result<Vec<Record>> {
    match cmd {
        Command::FolnerScan => cmd_folner_scan(r),
        Command::AlmostrepBuild => cmd_build(r),
        Command::Amplify => cmd_amplify(r),
        Command::Tensor => cmd_tensor(r),
        Command::Paradox => cmd_paradox(r),
        Command::AuditRank => cmd_audit(r),
        Command::CommutatorCheck => cmd_commutator(r),
        Command::RrEstimate => cmd_rr(r),
        Command::Verify => cmd_verify(r),
    }
}

fn base_params(r: &Resolved, c: &Carrier) -> Result<Map<String, Value>> {
    let mut m = Map::new();
    m.insert("algebra".into(), serde_json::to_value(r.algebra_spec()?).expect("spec serializes"));
    m.insert("field".into(), c.field().to_string().into());
    Ok(m)
}

fn rep_params(r: &Resolved, key: &str) -> Value {
    let mut m = Map::new();
    match (key, &r.cfg.rep, &r.cfg.rep_b) {
        ("rep", Some(crate::config::InlineOrPath::Path(p)), _) | ("rep_b", _, Some(crate::config::InlineOrPath::Path(p))) => {
            m.insert(key.into(), p.clone().into());
        }
        _ => {
            if let Ok(spec) = r.algebra_spec() {
                m.insert("algebra".into(), serde_json::to_value(spec).expect("spec serializes"));
            }
            m.insert("L".into(), json!(r.cfg.l));
            if let Ok(c) = r.carrier() {
                m.insert("exhaustion".into(), json!(r.exhaustion(&c)));
            }
            m.insert("n".into(), r.index().into());
        }
    }
    if let Ok(Some(f)) = r.field() {
        m.insert("field".into(), f.to_string().into());
    }
    Value::Object(m)
}

fn rep_summary(rep: &AlmostRep) -> Value {
    json!({
        "field": rep.field().to_string(),
        "dim_l": rep.dim_l(),
        "v_dim": rep.v_dim(),
        "core_dim": rep.core_dim(),
        "defect": ratio(rep.defect()),
        "table_size": rep.table().len(),
    })
}

fn verify_summary(v: &VerificationReport) -> Value {
    json!({
        "unit_ok": v.unit_ok,
        "failing_pairs": v.failing_pairs,
        "max_core_dim": v.max_core_dim(),
        "max_core_defect": ratio(v.max_core_defect),
        "stored_core_dim": v.stored_core_dim,
        "passed": v.passed(),
    })
}

fn save(r: &Resolved, path: &Option<String>, v: &Value) -> Result<()> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(v).expect("json serializes");
        std::fs::write(r.path(p), text + "\n").map_err(|e| Error::Io(format!("{p}: {e}")))?;
    }
    Ok(())
}

fn cmd_folner_scan(r: &Resolved) -> Result<Vec<Record>> {
    let c = r.carrier()?;
    let b = match &r.cfg.b {
        Some(v) => {
            let lits: Vec<String> =
                serde_json::from_value(v.clone()).map_err(|e| usage(format!("\"B\" must be a list of literals: {e}")))?;
            span(&c, &r.elements(&c, &lits)?)?
        }
        None => r.l(&c)?,
    };
    let exh = r.exhaustion(&c);
    let certs = folner_scan(&c, &b, &exh, r.n_max())?;
    let mut params = base_params(r, &c)?;
    params.insert("B".into(), json!(b.labels()));
    params.insert("exhaustion".into(), json!(exh));
    Ok(certs
        .into_iter()
        .enumerate()
        .map(|(i, cert)| {
            let mut p = params.clone();
            p.insert("n".into(), (i + 1).into());
            let mut t = Timed::new(Command::FolnerScan, Value::Object(p));
            t.set("dim_q", cert.dim_q)
                .set("dim_bq", cert.dim_bq)
                .set("ratio", ratio(cert.ratio))
                .set("boundary_effect", cert.boundary_effect);
            t.finish(true)
        })
        .collect())
}

fn cmd_build(r: &Resolved) -> Result<Vec<Record>> {
    let mut t = Timed::new(Command::AlmostrepBuild, rep_params(r, "build"));
    let rep = r.rep(None)?;
    let l = rep.source().expect("built from the config");
    let q = r.q(l.carrier(), r.index())?;
    let bound = folner_build(l, &q)?.defect_bound();
    let v = verify(&rep);
    save(r, &r.cfg.save_rep, &rep.to_json())?;
    t.set("rep", rep_summary(&rep))
        .set("labels", json!(rep.labels()))
        .set("defect_bound", ratio(bound))
        .set("verify", verify_summary(&v));
    let pass = v.passed() && rep.defect() <= bound;
    Ok(vec![t.finish(pass)])
}

fn cmd_verify(r: &Resolved) -> Result<Vec<Record>> {
    let mut t = Timed::new(Command::Verify, rep_params(r, "rep"));
    let rep = r.rep(r.cfg.rep.as_ref())?;
    let v = verify(&rep);
    let contained = v.max_core.span_contains(rep.core());
    t.set("rep", rep_summary(&rep))
        .set("verify", verify_summary(&v))
        .set("stored_core_in_max", contained);
    Ok(vec![t.finish(v.passed() && contained)])
}

fn cmd_amplify(r: &Resolved) -> Result<Vec<Record>> {
    let factor = r.cfg.factor.unwrap_or(2);
    let mut params = rep_params(r, "rep");
    params["factor"] = factor.into();
    let mut t = Timed::new(Command::Amplify, params);
    let rep = r.rep(r.cfg.rep.as_ref())?;
    let amp = amplify(&rep, factor)?;
    let v = verify(&amp);
    let dims_ok = amp.v_dim() == factor * rep.v_dim();
    let core_ok = amp.core_dim() >= factor * rep.core_dim();
    let defect_ok = amp.defect() <= rep.defect();
    t.set("base", rep_summary(&rep))
        .set("rep", rep_summary(&amp))
        .set("dims_scale", dims_ok)
        .set("core_scales", core_ok)
        .set("defect_not_larger", defect_ok)
        .set("verify", verify_summary(&v));
    Ok(vec![t.finish(dims_ok && core_ok && defect_ok && v.passed())])
}

fn cmd_tensor(r: &Resolved) -> Result<Vec<Record>> {
    let params = json!({ "rep": rep_params(r, "rep"), "rep_b": rep_params(r, "rep_b") });
    let mut t = Timed::new(Command::Tensor, params);
    let a = r.rep(r.cfg.rep.as_ref())?;
    let b = match &r.cfg.rep_b {
        Some(v) => r.rep(Some(v))?,
        None => a.clone(),
    };
    let tp = tensor(&a, &b)?;
    let one = Ratio::from_integer(1);
    let submult = one - tp.defect() >= (one - a.defect()) * (one - b.defect());
    let v = verify(&tp);
    t.set("a", rep_summary(&a))
        .set("b", rep_summary(&b))
        .set("rep", rep_summary(&tp))
        .set("submultiplicative", submult)
        .set("verify", verify_summary(&v));
    Ok(vec![t.finish(submult && v.passed())])
}

fn cmd_paradox(r: &Resolved) -> Result<Vec<Record>> {
    let g = r.graph()?;
    let field = r.field()?.unwrap_or_default();
    let mut out = Vec::new();
    for k in r.ks() {
        let mut t = Timed::new(Command::Paradox, json!({ "graph": r.cfg.graph, "K": k, "field": field.to_string() }));
        let p = paradoxical_pair(&g, k)?;
        let rep = verify_pair(&p);
        let interior = g.interior(k).len();
        let normalized = (interior > 0).then(|| ratio(Ratio::new(p.deficiency() as i64, 2 * interior as i64)));
        let non_ibn = if p.deficiency() == 0 {
            match non_ibn_witness(&p, field) {
                Ok(cert) => json!({ "wu_ok": cert.wu_ok, "uw_ok": cert.uw_ok }),
                Err(e) => json!({ "error": e.to_string() }),
            }
        } else {
            Value::Null
        };
        let non_ibn_ok = non_ibn.is_null() || (non_ibn["wu_ok"] == true && non_ibn["uw_ok"] == true);
        save(r, &r.cfg.save_pair, &p.to_json())?;
        t.set(
            "graph_summary",
            json!({ "vertices": g.len(), "edges": g.edge_count(), "radius": g.radius(), "full_degree": g.full_degree() }),
        )
        .set("interior", interior)
        .set("deficiency", p.deficiency())
        .set("normalized_deficiency", normalized)
        .set("deficiency_in_outer_shells", p.deficiency_in_outer_shells())
        .set("doubling", p.deficiency() == 0)
        .set("domain_size", p.domain().len())
        .set(
            "identities",
            json!({
                "AtA_eq_I": rep.ata.is_empty(),
                "BtB_eq_I": rep.btb.is_empty(),
                "AtB_eq_0": rep.atb.is_empty(),
                "AAt_plus_BBt_eq_I": rep.aat_bbt.is_empty(),
            }),
        )
        .set("transposed_reading_ok", rep.transposed_reading_ok)
        .set("displacement_ok", rep.displacement_ok)
        .set("empty", rep.empty)
        .set("non_ibn", non_ibn);
        out.push(t.finish(rep.passed() && non_ibn_ok));
    }
    Ok(out)
}

fn parse_matrix(c: &Carrier, m: &[Vec<String>]) -> Result<Vec<Vec<AlgebraElement>>> {
    m.iter()
        .map(|row| row.iter().map(|s| c.parse_element(s)).collect())
        .collect()
}

fn format_matrix(c: &Carrier, m: &[Vec<AlgebraElement>]) -> Value {
    json!(m
        .iter()
        .map(|row| row.iter().map(|a| c.format_element(a)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn audit_fields(t: &mut Timed, a: &RankAudit) {
    t.set("m", a.m)
        .set("n", a.n)
        .set("v_dim", a.v_dim)
        .set("core_dim", a.core_dim)
        .set("lhs", a.lhs)
        .set("rhs", a.rhs)
        .set("contradiction", a.contradiction)
        .set("rank_product", a.rank_product)
        .set("rank_ok", a.rank_ok)
        .set("fixed_dim", a.fixed_dim)
        .set("ab_is_identity", a.ab_is_identity)
        .set("fixed_bound_ok", a.fixed_bound_ok);
}

fn random_in(l: &FinSubspace, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let f = l.carrier().field();
    let coords: Vec<_> = (0..l.dim()).map(|_| f.from_i64(rng.gen_range(-2..=2))).collect();
    l.combine(&coords)
}

fn cmd_audit(r: &Resolved) -> Result<Vec<Record>> {
    let rep = r.rep(r.cfg.rep.as_ref())?;
    let l = rep
        .source()
        .ok_or_else(|| usage("audit-rank needs \"algebra\" to read the representation's L"))?
        .clone();
    let c = l.carrier().clone();
    let params = rep_params(r, "rep");
    let b_matrix = match &r.cfg.b {
        Some(v) => Some(
            serde_json::from_value::<Vec<Vec<String>>>(v.clone())
                .map_err(|e| usage(format!("\"B\" must be a matrix of literals: {e}")))?,
        ),
        None => None,
    };
    if let (Some(a), Some(b)) = (&r.cfg.a_matrix, &b_matrix) {
        let mut t = Timed::new(Command::AuditRank, params);
        let (a, b) = (parse_matrix(&c, a)?, parse_matrix(&c, b)?);
        let audit = rank_condition_audit(&rep, &a, &b)?;
        t.set("A", format_matrix(&c, &a)).set("B", format_matrix(&c, &b));
        audit_fields(&mut t, &audit);
        return Ok(vec![t.finish(audit.passed())]);
    }
    let [m, n] = r.cfg.shape.unwrap_or([2, 1]);
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    (0..r.cfg.trials.unwrap_or(100))
        .map(|trial| {
            let mut p = params.clone();
            p["trial"] = trial.into();
            p["seed"] = r.seed.into();
            let mut t = Timed::new(Command::AuditRank, p);
            let a: Vec<Vec<_>> = (0..m).map(|_| (0..n).map(|_| random_in(&l, &mut rng)).collect()).collect();
            let b: Vec<Vec<_>> = (0..n).map(|_| (0..m).map(|_| random_in(&l, &mut rng)).collect()).collect();
            let audit = rank_condition_audit(&rep, &a, &b)?;
            t.set("A", format_matrix(&c, &a)).set("B", format_matrix(&c, &b));
            audit_fields(&mut t, &audit);
            Ok(t.finish(audit.passed()))
        })
        .collect()
}

fn commutator_fields(t: &mut Timed, c: &CommutatorReport) {
    t.set("l", c.l)
        .set("v_dim", c.v_dim)
        .set("epsilon_l", c.epsilon_l)
        .set("rank_ts_minus_st", c.rank_ts_minus_st)
        .set("bound", c.bound);
}

fn cmd_commutator(r: &Resolved) -> Result<Vec<Record>> {
    if let (Some(ts), Some(ss)) = (&r.cfg.t, &r.cfg.s) {
        let field = r.field()?.unwrap_or_default();
        let mut t = Timed::new(Command::CommutatorCheck, json!({ "T": ts, "S": ss, "field": field.to_string() }));
        let rep = commutator_bound_check(&Mat::from_i64_rows(field, ts)?, &Mat::from_i64_rows(field, ss)?)?;
        commutator_fields(&mut t, &rep);
        return Ok(vec![t.finish(rep.pass)]);
    }
    if let Some([x, y]) = &r.cfg.elements {
        let mut params = rep_params(r, "rep");
        params["elements"] = json!([x, y]);
        let mut t = Timed::new(Command::CommutatorCheck, params);
        let rep = r.rep(r.cfg.rep.as_ref())?;
        let c: Arc<Carrier> = rep
            .source()
            .ok_or_else(|| usage("\"elements\" needs \"algebra\""))?
            .carrier()
            .clone();
        let tm = rep.image_of(&c.parse_element(x)?)?;
        let sm = rep.image_of(&c.parse_element(y)?)?;
        let report = commutator_bound_check(&tm, &sm)?;
        commutator_fields(&mut t, &report);
        return Ok(vec![t.finish(report.pass)]);
    }
    let field = r.field()?.unwrap_or_default();
    let [lo, hi] = r.cfg.sizes.unwrap_or([2, 16]);
    if lo == 0 || lo > hi {
        return Err(usage(format!("bad size range [{lo}, {hi}]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(r.seed);
    (0..r.cfg.trials.unwrap_or(1000))
        .map(|trial| {
            let size = rng.gen_range(lo..=hi);
            let (kind, tm, sm, perturbation) = if trial % 2 == 0 {
                let density = rng.gen_range(0.1..0.9);
                let tm = random_mat(field, size, size, density, &mut rng);
                let sm = random_mat(field, size, size, density, &mut rng);
                ("sparse", tm, sm, None)
            } else {
                let (tm, sm, k) = near_inverse_pair(field, size, &mut rng);
                ("near_inverse", tm, sm, Some(k))
            };
            let mut t = Timed::new(
                Command::CommutatorCheck,
                json!({
                    "trial": trial,
                    "seed": r.seed,
                    "size": size,
                    "kind": kind,
                    "perturbation_rank": perturbation,
                    "field": field.to_string(),
                }),
            );
            let report = commutator_bound_check(&tm, &sm)?;
            commutator_fields(&mut t, &report);
            Ok(t.finish(report.pass))
        })
        .collect()
}

fn random_mat(field: Field, rows: usize, cols: usize, density: f64, rng: &mut ChaCha8Rng) -> Mat {
    Mat::from_fn(field, rows, cols, |_, _| {
        if rng.gen_bool(density) {
            field.from_i64(rng.gen_range(-5..=5))
        } else {
            field.zero()
        }
    })
}

/// `T` invertible and `S = T^-1 + UW` with `UW` of rank at most `k`, so `TS`
/// fixes a subspace of codimension at most `k`.
fn near_inverse_pair(field: Field, size: usize, rng: &mut ChaCha8Rng) -> (Mat, Mat, usize) {
    let (tm, inv) = loop {
        let tm = random_mat(field, size, size, 0.5, rng);
        if let Some(inv) = tm.inverse() {
            break (tm, inv);
        }
    };
    let k = rng.gen_range(0..=size);
    let u = random_mat(field, size, k, 0.5, rng);
    let w = random_mat(field, k, size, 0.5, rng);
    let mut sm = inv;
    if k > 0 {
        sm.add_scaled(&field.one(), &(&u * &w));
    }
    (tm, sm, k)
}

fn cmd_rr(r: &Resolved) -> Result<Vec<Record>> {
    let c = r.carrier()?;
    let l = r.l(&c)?;
    let p = c.parse_element(r.cfg.p.as_deref().ok_or_else(|| usage("rr-estimate needs \"p\""))?)?;
    let exh = r.exhaustion(&c);
    let n_max = r.n_max();
    let series = rr_estimate(&c, &p, &l, &exh, n_max)?;
    let mono = match &r.cfg.a {
        Some(a) => {
            let a = c.parse_element(a)?;
            let ap = c.mul(&a, &p)?;
            let mut gens = l.basis().to_vec();
            gens.push(ap.clone());
            let l2 = span(&c, &gens)?;
            let series_ap = rr_estimate(&c, &ap, &l2, &exh, n_max)?;
            Some((rr_monotonicity_report(&c, &series, &series_ap, &a)?, series_ap))
        }
        None => None,
    };
    let mut params = base_params(r, &c)?;
    params.insert("L".into(), json!(l.labels()));
    params.insert("p".into(), c.format_element(&p).into());
    params.insert("a".into(), json!(r.cfg.a));
    params.insert("exhaustion".into(), json!(exh));
    Ok(series
        .records
        .iter()
        .enumerate()
        .map(|(i, rec)| {
            let mut pm = params.clone();
            pm.insert("n".into(), rec.n.into());
            let mut t = Timed::new(Command::RrEstimate, Value::Object(pm));
            t.set("v_dim", rec.v_dim)
                .set("rank", rec.rank)
                .set("ratio", ratio(rec.ratio))
                .set("defect", ratio(rec.defect));
            let mut pass = true;
            if let Some((m, sap)) = &mono {
                let (_, check) = &m.checks[i];
                t.set("rank_ap", sap.records[i].rank)
                    .set("defect_ap", ratio(sap.records[i].defect))
                    .set("ideal_bound", ratio(check.bound))
                    .set("ideal_ok", check.pass);
                pass = check.pass && m.product_ok;
            }
            t.finish(pass)
        })
        .collect())
}
