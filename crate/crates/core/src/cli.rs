//! The `tricat` command line: argument parsing, input loading, dispatch and
//! report rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde_json::{json, Map, Value};

use crate::bitset::Bits;
use crate::mf::{self, MatrixFactorization};
use crate::polyalg::{self, Ideal, RingFile, RingMapCert, Q};
use crate::spectral_space::SpecSpace;
use crate::suite;
use crate::support_model::{self, ClassifyingWitness, ModelError, SupportModel};
use crate::tensor_model::{TensorModel, TensorTable};

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Verb {
    SpaceAnalyze,
    ModelCheck,
    ModelSpectrum,
    ModelReconstruct,
    ModelQuotient,
    TensorSpc,
    TensorClassify,
    PolyGroebner,
    SingJacobian,
    SingCompare,
    IsoCheck,
    MfStableEnd,
    MfFullSupport,
    Suite,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Parser, Debug, Clone)]
#[command(name = "tricat", version, about = "Support data on finite models, Groebner bases and matrix factorizations")]
pub struct Cli {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Space file; repeat to make several spaces available to a model.
    #[arg(long)]
    pub space: Vec<PathBuf>,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub ring: Option<PathBuf>,
    #[arg(long)]
    pub mf: Option<PathBuf>,
    /// Ring isomorphism certificate for `iso-check`.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Specialization-closed subset for `model-quotient`, e.g. `{p1}`.
    #[arg(long)]
    pub subset: Option<String>,
    /// Polynomial name for `sing-jacobian`.
    #[arg(long, default_value = "f")]
    pub poly: String,
    /// Ideal names compared by `sing-compare`.
    #[arg(long, default_value = "J")]
    pub left: String,
    #[arg(long, default_value = "M")]
    pub right: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for the randomized checks of `suite`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl Cli {
    /// The invocation, reconstructed from the parsed arguments.
    pub fn echo(&self) -> String {
        let mut s = format!("tricat {}", self.verb.to_possible_value().expect("named").get_name());
        for p in &self.space {
            let _ = write!(s, " --space {}", p.display());
        }
        let opts = [("model", &self.model), ("ring", &self.ring), ("mf", &self.mf), ("cert", &self.cert)];
        for (flag, p) in opts {
            if let Some(p) = p {
                let _ = write!(s, " --{flag} {}", p.display());
            }
        }
        if let Some(w) = &self.subset {
            let _ = write!(s, " --subset {w}");
        }
        match self.verb {
            Verb::SingJacobian => {
                let _ = write!(s, " --poly {}", self.poly);
            }
            Verb::SingCompare => {
                let _ = write!(s, " --left {} --right {}", self.left, self.right);
            }
            Verb::Suite => {
                let _ = write!(s, " --seed {}", self.seed);
            }
            _ => {}
        }
        s
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub status: Status,
    pub payload: BTreeMap<String, Value>,
    pub counterexample: BTreeMap<String, Value>,
}

impl Report {
    fn new(command: String) -> Self {
        Report { command, status: Status::Pass, payload: BTreeMap::new(), counterexample: BTreeMap::new() }
    }

    fn error(command: String, message: String) -> Self {
        let mut r = Report::new(command);
        r.status = Status::Error;
        r.payload.insert("error".into(), Value::String(message));
        r
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) {
        self.payload.insert(key.into(), v.into());
    }

    /// Records a failed check; the report fails once any check does.
    fn require(&mut self, ok: bool, key: &str, witness: impl FnOnce() -> Value) {
        if !ok {
            self.status = Status::Fail;
            self.counterexample.insert(key.into(), witness());
        }
    }
}

/// Everything read from disk for one invocation.
#[derive(Debug, Default)]
pub struct Inputs {
    pub spaces: Vec<SpecSpace>,
    pub model: Option<support_model::ModelFile>,
    pub ring: Option<RingFile<Q>>,
    pub mf: Option<MatrixFactorization<Q>>,
    pub cert: Option<RingMapCert<Q>>,
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn located(path: &Path, e: impl std::fmt::Display) -> String {
    let msg = e.to_string();
    if msg.starts_with(|c: char| c.is_ascii_digit()) {
        format!("{}:{msg}", path.display())
    } else {
        format!("{}: {msg}", path.display())
    }
}

/// Reads and parses every file named on the command line, resolving model
/// references against the given spaces.
pub fn parse_inputs(cli: &Cli) -> Result<Inputs, String> {
    let mut inputs = Inputs::default();
    for p in &cli.space {
        let space = SpecSpace::parse(&read(p)?).map_err(|e| located(p, e))?;
        inputs.spaces.push(space);
    }
    if let Some(p) = &cli.model {
        let m = support_model::parse_model(&read(p)?, &inputs.spaces).map_err(|e| located(p, e))?;
        inputs.model = Some(m);
    }
    if let Some(p) = &cli.ring {
        inputs.ring = Some(polyalg::parse_ring_file(&read(p)?).map_err(|e| located(p, e))?);
    }
    if let Some(p) = &cli.mf {
        inputs.mf = Some(MatrixFactorization::parse(&read(p)?).map_err(|e| located(p, e))?);
    }
    if let Some(p) = &cli.cert {
        inputs.cert = Some(polyalg::parse_cert(&read(p)?).map_err(|e| located(p, e))?);
    }
    Ok(inputs)
}

fn need<'a, T>(v: &'a Option<T>, flag: &str) -> Result<&'a T, String> {
    v.as_ref().ok_or_else(|| format!("this verb needs --{flag}"))
}

pub fn run(cli: &Cli) -> Report {
    let command = cli.echo();
    let inputs = match parse_inputs(cli) {
        Ok(i) => i,
        Err(e) => return Report::error(command, e),
    };
    let mut report = Report::new(command.clone());
    let outcome = match cli.verb {
        Verb::SpaceAnalyze => space_analyze(&inputs, &mut report),
        Verb::ModelCheck => model_check(&inputs, &mut report),
        Verb::ModelSpectrum => model_spectrum(&inputs, &mut report),
        Verb::ModelReconstruct => model_reconstruct(&inputs, &mut report),
        Verb::ModelQuotient => model_quotient(&inputs, cli.subset.as_deref(), &mut report),
        Verb::TensorSpc => tensor_spc(&inputs, &mut report),
        Verb::TensorClassify => tensor_classify(&inputs, &mut report),
        Verb::PolyGroebner => poly_groebner(&inputs, &mut report),
        Verb::SingJacobian => sing_jacobian(&inputs, &cli.poly, &mut report),
        Verb::SingCompare => sing_compare(&inputs, &cli.left, &cli.right, &mut report),
        Verb::IsoCheck => iso_check(&inputs, &mut report),
        Verb::MfStableEnd => mf_stable_end(&inputs, &mut report),
        Verb::MfFullSupport => mf_full_support(&inputs, &mut report),
        Verb::Suite => run_suite(cli.seed, &mut report),
    };
    match outcome {
        Ok(()) => report,
        Err(e) => Report::error(command, e),
    }
}

type Step = Result<(), String>;

fn subsets(space: &SpecSpace, sets: &[Bits]) -> Value {
    sets.iter().map(|&s| Value::String(space.format_subset(s))).collect()
}

fn space_analyze(inputs: &Inputs, r: &mut Report) -> Step {
    let space = inputs.spaces.first().ok_or("this verb needs --space")?;
    r.put("space", space.name());
    r.put("points", space.points().iter().map(|p| p.id.clone()).collect::<Vec<_>>());
    let covers: Vec<String> =
        space.covers().into_iter().map(|(p, q)| format!("{} -> {}", space.id(p), space.id(q))).collect();
    r.put("covers", covers);
    let mut closed = space.closed_sets();
    closed.sort();
    r.put("closed_sets", subsets(space, &closed));
    let irreducible: Vec<String> = space
        .irreducible_sets()
        .into_iter()
        .map(|z| {
            let g = space.generic_point(z).map(|p| p.id.clone()).unwrap_or_default();
            format!("{} generic {g}", space.format_subset(z))
        })
        .collect();
    r.put("irreducible_closed_sets", irreducible);
    r.put("specialization_closed_count", space.specialization_closed_sets().len());
    Ok(())
}

fn model(inputs: &Inputs) -> Result<&SupportModel, String> {
    Ok(&need(&inputs.model, "model")?.model)
}

fn witness_text(m: &SupportModel, w: &ClassifyingWitness) -> String {
    let sp = m.space();
    match *w {
        ClassifyingWitness::ThickNotRecovered { thick, support, back } => format!(
            "thick {} has support {} which maps back to {}",
            m.format_objects(thick),
            sp.format_subset(support),
            m.format_objects(back)
        ),
        ClassifyingWitness::SubsetNotRealized { subset, thick, back } => format!(
            "subset {} gives {} whose support is {}",
            sp.format_subset(subset),
            m.format_objects(thick),
            sp.format_subset(back)
        ),
        ClassifyingWitness::PreimageNotThick { subset, preimage } => {
            format!("preimage {} of {} is not thick", m.format_objects(preimage), sp.format_subset(subset))
        }
    }
}

fn triples(m: &SupportModel, v: &[(usize, usize, usize)]) -> Value {
    v.iter().map(|&(a, b, c)| Value::String(format!("{} {} {}", m.id(a), m.id(b), m.id(c)))).collect()
}

fn model_check(inputs: &Inputs, r: &mut Report) -> Step {
    let m = model(inputs)?;
    r.put("model", m.name());
    let supports: Map<String, Value> = (0..m.len())
        .map(|o| (m.id(o).to_string(), Value::String(m.space().format_subset(m.sigma(o)))))
        .collect();
    r.put("supports", supports);
    let ax = m.check_support_axioms();
    r.put("faithful", ax.faithful);
    r.require(ax.supports_closed, "supports_closed", || json!(false));
    r.require(ax.zero_has_empty_support, "zero_support", || json!("σ(0) is not empty"));
    r.require(ax.sum_violations.is_empty(), "sum_violations", || triples(m, &ax.sum_violations));
    r.require(ax.triangle_violations.is_empty(), "triangle_violations", || triples(m, &ax.triangle_violations));
    let c = m.is_classifying();
    r.put("thick_subcategories", c.thick_count);
    r.put("specialization_closed_subsets", c.spcl_count);
    r.require(c.holds(), "classifying", || {
        Value::String(c.witness.as_ref().map(|w| witness_text(m, w)).unwrap_or_default())
    });
    Ok(())
}

fn spectrum_payload(m: &SupportModel, r: &mut Report) -> support_model::SpectrumResult {
    let s = m.spec_of();
    let points: Vec<String> = s.points.iter().map(|&x| m.format_objects(x)).collect();
    r.put("spectrum_points", points);
    let supp: Map<String, Value> = (0..m.len())
        .map(|o| {
            let ids: Vec<String> = s.supp[o].iter().map(|i| format!("P{i}")).collect();
            (m.id(o).to_string(), Value::String(format!("{{{}}}", ids.join(", "))))
        })
        .collect();
    r.put("spectrum_supports", supp);
    r.put("subbasis_is_basis", s.subbasis_is_basis);
    if let Some(space) = &s.space {
        r.put("spectrum_space", space.to_text());
    }
    s
}

fn model_spectrum(inputs: &Inputs, r: &mut Report) -> Step {
    let m = model(inputs)?;
    let s = spectrum_payload(m, r);
    r.require(s.discrepancy.is_none(), "discrepancy", || Value::String(s.discrepancy.clone().unwrap_or_default()));
    Ok(())
}

fn model_reconstruct(inputs: &Inputs, r: &mut Report) -> Step {
    let m = model(inputs)?;
    match m.verify_reconstruction() {
        Ok(rep) => {
            let phi: Vec<String> = rep
                .phi
                .iter()
                .enumerate()
                .map(|(x, &i)| format!("{} -> {}", m.space().id(x), m.format_objects(rep.spectrum.points[i])))
                .collect();
            r.put("phi", phi);
            r.put("homeomorphism", rep.homeomorphism);
            r.require(rep.homeomorphism, "homeomorphism", || json!(false));
            r.require(rep.support_mismatches.is_empty(), "support_mismatches", || {
                rep.support_mismatches.iter().map(|&o| Value::String(m.id(o).to_string())).collect()
            });
            Ok(())
        }
        Err(ModelError::NotClassifying(w)) => {
            r.require(false, "classifying", || Value::String(w));
            Ok(())
        }
        Err(e) => Err(e.to_string()),
    }
}

fn parse_subset(space: &SpecSpace, s: &str) -> Result<Bits, String> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Bits::EMPTY;
    for id in inner.split([',', ' ']).map(str::trim).filter(|t| !t.is_empty()) {
        out.insert(space.index_of(id).map_err(|e| format!("--subset: {e}"))?);
    }
    Ok(out)
}

fn model_quotient(inputs: &Inputs, subset: Option<&str>, r: &mut Report) -> Step {
    let m = model(inputs)?;
    let w = parse_subset(m.space(), subset.ok_or("this verb needs --subset")?)?;
    let q = match m.quotient_model(w) {
        Ok(q) => q,
        Err(ModelError::NotClassifying(w)) => {
            r.require(false, "classifying", || Value::String(w));
            return Ok(());
        }
        Err(e) => return Err(e.to_string()),
    };
    r.put("killed", m.format_objects(m.g_sigma(w).map_err(|e| e.to_string())?));
    r.put("quotient_space", q.space().to_text());
    r.put("quotient_model", q.to_text());
    r.require(q.check_support_axioms().passes(), "quotient_axioms", || json!(false));
    let c = q.is_classifying();
    r.require(c.holds(), "quotient_classifying", || {
        Value::String(c.witness.as_ref().map(|w| witness_text(&q, w)).unwrap_or_default())
    });
    if c.holds() {
        let rec = q.verify_reconstruction().map_err(|e| e.to_string())?;
        r.require(rec.passes(), "quotient_reconstruction", || json!(false));
    }
    Ok(())
}

fn tensor_model(inputs: &Inputs) -> Result<TensorModel, String> {
    let file = need(&inputs.model, "model")?;
    let table = if file.tensor_lines.is_empty() {
        TensorTable::intersection(&file.model)
    } else {
        TensorTable::parse(&file.model, &file.tensor_lines)
    }
    .map_err(|e| e.to_string())?;
    Ok(TensorModel::new(file.model.clone(), table))
}

fn tensor_spc(inputs: &Inputs, r: &mut Report) -> Step {
    let tm = tensor_model(inputs)?;
    let m = &tm.model;
    let b = tm.balmer_spectrum();
    let primes: Vec<String> = b.primes.iter().enumerate().map(|(i, &p)| format!("P{i} = {}", m.format_objects(p))).collect();
    r.put("primes", primes);
    let spp: Map<String, Value> = (0..m.len())
        .map(|o| {
            let ids: Vec<String> = b.spp[o].iter().map(|i| format!("P{i}")).collect();
            (m.id(o).to_string(), Value::String(format!("{{{}}}", ids.join(", "))))
        })
        .collect();
    r.put("spp", spp);
    r.put("closed_sets", b.closed_sets.len());
    r.put("faithful", b.faithful);
    r.put("tensorial", b.tensorial);
    if let Some(space) = &b.space {
        r.put("spc_space", space.to_text());
    }
    r.require(b.support_axioms, "support_axioms", || json!("Spp violates the support axioms"));
    r.require(b.space.is_some(), "spc_space", || json!("Spc topology is not T0"));
    Ok(())
}

fn tensor_classify(inputs: &Inputs, r: &mut Report) -> Step {
    let tm = tensor_model(inputs)?;
    let m = &tm.model;
    let c = tm.classify_radical_ideals().map_err(|e| e.to_string())?;
    let radicals: Vec<String> = c.radical_ideals.iter().map(|&x| m.format_objects(x)).collect();
    r.put("radical_ideals", radicals);
    r.put("thomason_subsets", c.thomason.len());
    r.require(c.holds(), "radical_classification", || Value::String(c.counterexample.clone().unwrap_or_default()));
    let u = tm.check_unit_generation();
    r.put("thick_are_ideals", u.thick_are_ideals);
    r.put("unit_generates", u.unit_generates);
    r.put("classifying", u.classifying);
    if let Some((x, a, b)) = u.non_ideal_witness {
        r.put(
            "non_ideal_witness",
            format!("{} is thick but {} ⊗ {} leaves it", m.format_objects(x), m.id(a), m.id(b)),
        );
    }
    if !u.unit_generates {
        r.put("outside_thick_unit", m.format_objects(u.outside_unit));
    }
    r.require(u.implications_hold, "unit_generation", || json!(format!("{u:?}")));
    Ok(())
}

fn show_polys(ring: &polyalg::Ring, v: &[polyalg::Poly<Q>]) -> Value {
    v.iter().map(|p| Value::String(ring.show(p))).collect()
}

fn poly_groebner(inputs: &Inputs, r: &mut Report) -> Step {
    let rf = need(&inputs.ring, "ring")?;
    r.put("ring", rf.ring.decl::<Q>());
    let bases: Map<String, Value> = rf
        .ideals
        .iter()
        .map(|(name, i)| (name.clone(), show_polys(&rf.ring, i.groebner().polys())))
        .collect();
    r.put("groebner_bases", bases);
    Ok(())
}

fn sing_jacobian(inputs: &Inputs, name: &str, r: &mut Report) -> Step {
    let rf = need(&inputs.ring, "ring")?;
    let f = rf.poly(name).ok_or_else(|| format!("no polynomial `{name}` in the ring file"))?;
    let j = polyalg::jacobian_ideal(f).map_err(|e| e.to_string())?;
    r.put("f", rf.ring.show(f));
    r.put("jacobian", show_polys(&rf.ring, j.gens()));
    r.put("groebner_basis", show_polys(&rf.ring, j.groebner().polys()));
    r.put("smooth", j.is_unit());
    Ok(())
}

fn missing_from_radical(ring: &polyalg::Ring, a: &Ideal<Q>, b: &Ideal<Q>) -> Value {
    a.gens().iter().filter(|g| !b.radical_member(g)).map(|g| Value::String(ring.show(g))).collect()
}

fn sing_compare(inputs: &Inputs, left: &str, right: &str, r: &mut Report) -> Step {
    let rf = need(&inputs.ring, "ring")?;
    let get = |n: &str| rf.ideal(n).ok_or_else(|| format!("no ideal `{n}` in the ring file"));
    let (a, b) = (get(left)?, get(right)?);
    let equal = a.equal_up_to_radical(b).map_err(|e| e.to_string())?;
    r.put("left", show_polys(&rf.ring, a.gens()));
    r.put("right", show_polys(&rf.ring, b.gens()));
    r.put("equal_up_to_radical", equal);
    r.require(equal, "radicals_differ", || {
        json!({
            format!("{left}_not_in_rad_{right}"): missing_from_radical(&rf.ring, a, b),
            format!("{right}_not_in_rad_{left}"): missing_from_radical(&rf.ring, b, a),
        })
    });
    Ok(())
}

fn iso_check(inputs: &Inputs, r: &mut Report) -> Step {
    let c = need(&inputs.cert, "cert")?;
    r.put("source", c.source.show());
    r.put("target", c.target.show());
    let rep = polyalg::check_ring_iso(c).map_err(|e| e.to_string())?;
    let list = |v: &[String]| -> Value { v.iter().cloned().map(Value::String).collect() };
    r.require(rep.forward_failures.is_empty(), "forward_not_well_defined", || list(&rep.forward_failures));
    r.require(rep.inverse_failures.is_empty(), "inverse_not_well_defined", || list(&rep.inverse_failures));
    r.require(rep.source_roundtrip_failures.is_empty(), "source_roundtrip", || list(&rep.source_roundtrip_failures));
    r.require(rep.target_roundtrip_failures.is_empty(), "target_roundtrip", || list(&rep.target_roundtrip_failures));
    Ok(())
}

fn mf_stable_end(inputs: &Inputs, r: &mut Report) -> Step {
    let m = need(&inputs.mf, "mf")?;
    let e = mf::stable_end_ring(m).map_err(|e| e.to_string())?;
    let ring = &m.ring;
    let names: Vec<String> =
        std::iter::once("id".to_string()).chain(e.generator_names.iter().cloned()).collect();
    let gens: Vec<String> = e
        .hom
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| format!("{} = {}", names.get(i).cloned().unwrap_or_else(|| format!("g{i}")), g.show(ring)))
        .collect();
    r.put("generators", gens);
    r.put("relation_matrix", e.hom.module.show(ring));
    let mut table = Vec::new();
    for (i, row) in e.product.iter().enumerate() {
        for (j, coords) in row.iter().enumerate() {
            let terms: Vec<String> = coords
                .iter()
                .zip(&names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| format!("({})*{n}", ring.show(c)))
                .collect();
            let rhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            table.push(Value::String(format!("{} * {} = {rhs}", names[i], names[j])));
        }
    }
    r.put("products", table);
    r.put("zero_ring", e.is_zero_ring());
    let ann = mf::annihilator(&e.hom.module);
    r.put("annihilator", show_polys(ring, ann.gens()));
    r.require(e.is_commutative(), "noncommuting", || {
        e.noncommuting.iter().map(|&(i, j)| Value::String(format!("{} {}", names[i], names[j]))).collect()
    });
    r.require(e.nonassociative.is_empty(), "nonassociative", || json!(format!("{:?}", e.nonassociative)));
    if let Some(q) = &e.ring {
        r.put("ring_presentation", q.show());
    }
    r.require(e.ring.is_some(), "ring_presentation", || json!("no commutative presentation"));
    Ok(())
}

fn mf_full_support(inputs: &Inputs, r: &mut Report) -> Step {
    let m = need(&inputs.mf, "mf")?;
    let end = mf::stable_hom(m, m).map_err(|e| e.to_string())?;
    let ann = mf::annihilator(&end.module);
    let jac = polyalg::jacobian_ideal(&m.f).map_err(|e| e.to_string())?;
    r.put("annihilator", show_polys(&m.ring, ann.gens()));
    r.put("jacobian", show_polys(&m.ring, jac.gens()));
    let full = mf::full_support_check(m).map_err(|e| e.to_string())?;
    r.put("full_support", full);
    r.require(full, "support", || {
        json!({
            "annihilator_not_in_rad_jacobian": missing_from_radical(&m.ring, &ann, &jac),
            "jacobian_not_in_rad_annihilator": missing_from_radical(&m.ring, &jac, &ann),
        })
    });
    Ok(())
}

fn run_suite(seed: u64, r: &mut Report) -> Step {
    let outcomes = suite::run_all(seed);
    let mut checks = Map::new();
    for o in &outcomes {
        let verdict = if o.passed() { "pass" } else { "fail" };
        checks.insert(o.name.to_string(), Value::String(format!("{verdict} ({} cases)", o.cases)));
        let over_time = o.limit.is_some_and(|l| o.elapsed > l);
        r.require(o.passed(), o.name, || {
            let mut v: Vec<Value> = o.failures.iter().take(5).cloned().map(Value::String).collect();
            if over_time {
                v.push(Value::String("time limit exceeded".into()));
            }
            Value::Array(v)
        });
    }
    r.put("checks", checks);
    Ok(())
}

fn render(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Array(items) if items.is_empty() => out.push_str(" []\n"),
        Value::Array(items) => {
            out.push('\n');
            for item in items {
                match item {
                    Value::String(s) if !s.contains('\n') => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    other => {
                        let _ = write!(out, "{pad}-");
                        render(out, other, indent + 2);
                    }
                }
            }
        }
        Value::Object(map) if map.is_empty() => out.push_str(" {}\n"),
        Value::Object(map) => {
            out.push('\n');
            for (k, v) in map {
                let _ = write!(out, "{pad}{k}:");
                render(out, v, indent + 2);
            }
        }
        Value::String(s) if s.contains('\n') => {
            out.push_str(" |\n");
            for line in s.lines() {
                let _ = writeln!(out, "{pad}{line}");
            }
        }
        Value::String(s) => {
            let _ = writeln!(out, " {s}");
        }
        other => {
            let _ = writeln!(out, " {other}");
        }
    }
}

pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut doc = Map::new();
            doc.insert("command".into(), Value::String(r.command.clone()));
            doc.insert("status".into(), Value::String(r.status.name().into()));
            doc.insert("payload".into(), Value::Object(r.payload.clone().into_iter().collect()));
            if r.status == Status::Fail {
                doc.insert("counterexample".into(), Value::Object(r.counterexample.clone().into_iter().collect()));
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("command: {}\nstatus: {}\n", r.command, r.status.name());
            for (k, v) in &r.payload {
                let _ = write!(s, "{k}:");
                render(&mut s, v, 2);
            }
            if r.status == Status::Fail {
                s.push_str("counterexample:");
                render(&mut s, &Value::Object(r.counterexample.clone().into_iter().collect()), 2);
            }
            s
        }
    }
}
