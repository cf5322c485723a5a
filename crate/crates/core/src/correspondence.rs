//! Per-double-coset spectra computed three ways, and report assembly.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::{json, Value};

use crate::dual_algebras::{
    a2_to_a1op_map, audit_f_g, build_a1_a2_star, build_block_algebra, cross_coset_products_vanish, f_g_fibers,
    invariant_algebra_ug, DualAlgebras, FgAudit,
};
use crate::error::{Error, Result};
use crate::groups::{
    build_elementary_abelian_symplectic, build_semidirect, double_cosets, is_prime, stabilizer_kg, DoubleCoset,
    FiniteGroup, Subgroup,
};
use crate::linalg::float::C64;
use crate::projective::{
    multiplicity_law, projective_rep_from_action, pullback_and_tensor_cocycle, trace_vanishing_check,
    twisted_group_algebra, ProjectiveRep,
};
use crate::semisimple::{split_simple, wedderburn_dims, wedderburn_dims_float, WedderburnSpectrum};
use crate::twist::{symplectic_candidate, TwistCandidate, TwistData};

/// Retries allowed after a degenerate random draw.
pub const MAX_RETRIES: u64 = 4;
/// Tolerance for traces, multiplicities and other composite float quantities.
pub const COMPOSITE_TOL: f64 = 1e-6;
const EQUIVARIANCE_SAMPLES: usize = 20;
const CROSS_COSET_SAMPLES: usize = 20;

/// How the instance is built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Construction {
    /// H = (Z/p)^{2n} with its symplectic twist, G = H ⋊ Γ.
    Symplectic {
        p: u32,
        #[serde(default = "default_n")]
        n: usize,
        /// Generators of Γ, each a list of rows.
        #[serde(default)]
        gamma_generators: Vec<Vec<Vec<i64>>>,
    },
    /// Cayley table file, subgroup indices and twist file.
    Table {
        group_file: PathBuf,
        subgroup: Vec<usize>,
        twist_file: PathBuf,
    },
}

fn default_n() -> usize {
    1
}

fn default_tol() -> f64 {
    1e-8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub construction: Construction,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub jobs: Option<usize>,
}

impl Config {
    pub fn symplectic(p: u32, n: usize, gamma_generators: Vec<Vec<Vec<i64>>>) -> Self {
        Config {
            construction: Construction::Symplectic { p, n, gamma_generators },
            seed: None,
            tol: default_tol(),
            out: None,
            jobs: None,
        }
    }

    /// Reads a JSON config; table paths are taken relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: Config =
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Construction::Table {
            group_file, twist_file, ..
        } = &mut cfg.construction
        {
            let base = path.parent().unwrap_or(Path::new("."));
            for f in [group_file, twist_file] {
                if f.is_relative() {
                    *f = base.join(&*f);
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.jobs == Some(0) {
            return Err(Error::Config("jobs must be positive".into()));
        }
        if let Construction::Symplectic { p, n, gamma_generators } = &self.construction {
            if *p == 2 || !is_prime(*p as u64) {
                return Err(Error::Config(format!("p must be an odd prime, got {p}")));
            }
            if *n == 0 {
                return Err(Error::Config("n must be positive".into()));
            }
            for (i, m) in gamma_generators.iter().enumerate() {
                if m.len() != 2 * n || m.iter().any(|r| r.len() != 2 * n) {
                    return Err(Error::Config(format!("generator {i} is not {0}×{0}", 2 * n)));
                }
            }
        }
        Ok(())
    }
}

/// G, H and an unverified twist on H.
#[derive(Clone, Debug)]
pub struct Instance {
    pub group: Arc<FiniteGroup>,
    pub h: Subgroup,
    pub twist: TwistCandidate,
    pub description: Value,
}

impl Instance {
    pub fn build(construction: &Construction) -> Result<Self> {
        match construction {
            Construction::Symplectic { p, n, gamma_generators } => {
                let (hgrp, sigma) = build_elementary_abelian_symplectic(*p, *n)?;
                let flat: Vec<Vec<i64>> = gamma_generators.iter().map(|m| m.concat()).collect();
                let sd = build_semidirect(&hgrp, &flat)?;
                let twist = symplectic_candidate(&sd.h, &sigma)?;
                Ok(Instance {
                    description: json!({
                        "type": "symplectic",
                        "p": p,
                        "n": n,
                        "gamma_generators": gamma_generators,
                        "gamma_order": sd.gamma.len(),
                        "group_order": sd.group.order(),
                        "h_order": sd.h.len(),
                    }),
                    group: sd.group,
                    h: sd.h,
                    twist,
                })
            }
            Construction::Table {
                group_file,
                subgroup,
                twist_file,
            } => {
                let group = Arc::new(FiniteGroup::parse_cayley(&std::fs::read_to_string(group_file)?)?);
                let h = Subgroup::new(group.clone(), subgroup)?;
                let twist = TwistCandidate::parse(&std::fs::read_to_string(twist_file)?, h.clone())?;
                Ok(Instance {
                    description: json!({
                        "type": "table",
                        "group_file": file_name(group_file),
                        "subgroup": subgroup,
                        "twist_file": file_name(twist_file),
                        "group_order": group.order(),
                        "h_order": h.len(),
                    }),
                    group,
                    h,
                    twist,
                })
            }
        }
    }
}

fn file_name(p: &Path) -> String {
    p.file_name().map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned())
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn ser_sig12<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(sig12(*x))
}

/// Deterministic seed for a sub-task.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f(seed)`, then up to [`MAX_RETRIES`] derived seeds while it fails retryably.
pub fn with_retries<T>(seed: u64, mut f: impl FnMut(u64) -> Result<T>) -> Result<T> {
    let mut s = seed;
    for attempt in 0..=MAX_RETRIES {
        match f(s) {
            Err(e) if e.is_retryable() && attempt < MAX_RETRIES => s = derive_seed(seed, 0xA77E, attempt + 1),
            r => return r,
        }
    }
    unreachable!()
}

/// Global checks, one flag each.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GlobalChecks {
    pub twist_axioms: bool,
    pub triangularity: bool,
    pub minimality_rank: bool,
    pub q_identity: bool,
    pub square_dim: bool,
    pub dual_algebras: bool,
    pub a2_a1op: bool,
    pub regular_character: bool,
    pub projective_traces: bool,
    pub cross_coset_vanishing: bool,
    pub block_partition: bool,
    pub total_dimension: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GlobalDetails {
    pub group_order: usize,
    pub h_order: usize,
    pub failed_axioms: Vec<String>,
    pub r_rank: Option<usize>,
    pub coset_count: usize,
    pub errors: Vec<String>,
}

/// Per-coset audits beyond the three spectra.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CosetChecks {
    pub f_homomorphism: bool,
    pub f_rank: usize,
    pub f_injective: bool,
    pub f_equivariant: bool,
    pub image_equals_ug: bool,
    pub ug_dim: usize,
    pub ug_dim_ok: bool,
    pub sum_squares_ok: bool,
    pub trace_vanishing: bool,
    pub multiplicity_law: bool,
    #[serde(serialize_with = "ser_sig12")]
    pub multiplicity_deviation: f64,
    pub coboundary_shortcut: bool,
    pub second_rep: usize,
    pub representative_invariance: bool,
}

impl CosetChecks {
    fn passed(&self) -> bool {
        self.f_homomorphism
            && self.f_injective
            && self.f_equivariant
            && self.image_equals_ug
            && self.ug_dim_ok
            && self.sum_squares_ok
            && self.trace_vanishing
            && self.multiplicity_law
            && self.coboundary_shortcut
            && self.representative_invariance
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct CosetSpectrum {
    pub rep: usize,
    pub size: usize,
    pub k_size: usize,
    pub dims_direct: Vec<usize>,
    pub dims_invariant: Vec<usize>,
    pub dims_predicted: Vec<usize>,
    pub kaplansky_ok: bool,
    pub identities_ok: bool,
    pub checks: CosetChecks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub instance: Value,
    pub seed: u64,
    #[serde(serialize_with = "ser_sig12")]
    pub tol: f64,
    pub global_checks: GlobalChecks,
    pub details: GlobalDetails,
    pub cosets: Vec<CosetSpectrum>,
}

impl Report {
    /// Every global check, and every coset's identities and divisibility, hold.
    pub fn passed(&self, verify_only: bool) -> bool {
        let g = &self.global_checks;
        let core = g.twist_axioms && g.triangularity && g.minimality_rank && g.q_identity && g.square_dim;
        if verify_only {
            return core && self.details.errors.is_empty();
        }
        core && g.dual_algebras
            && g.a2_a1op
            && g.regular_character
            && g.projective_traces
            && g.cross_coset_vanishing
            && g.block_partition
            && g.total_dimension
            && self.details.errors.is_empty()
            && !self.cosets.is_empty()
            && self.cosets.iter().all(|c| c.identities_ok && c.kaplansky_ok)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text rendering of the report.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("instance: {}\n", self.instance));
        out.push_str(&format!("seed: {}  tol: {:e}\n", self.seed, self.tol));
        out.push_str("global checks:\n");
        if let Value::Object(m) = serde_json::to_value(&self.global_checks).expect("checks serialize") {
            for (k, v) in m {
                out.push_str(&format!("  {k:<22} {}\n", if v == Value::Bool(true) { "ok" } else { "FAIL" }));
            }
        }
        if !self.details.failed_axioms.is_empty() {
            out.push_str(&format!("failed axioms: {}\n", self.details.failed_axioms.join(", ")));
        }
        for e in &self.details.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        if !self.cosets.is_empty() {
            out.push_str(&format!(
                "{:>6} {:>6} {:>6}  {:<14} {:<14} {:<14} {:<9} {}\n",
                "rep", "size", "|K_g|", "direct", "invariant", "predicted", "kaplansky", "identities"
            ));
            for c in &self.cosets {
                out.push_str(&format!(
                    "{:>6} {:>6} {:>6}  {:<14} {:<14} {:<14} {:<9} {}\n",
                    c.rep,
                    c.size,
                    c.k_size,
                    multiset(&c.dims_direct),
                    multiset(&c.dims_invariant),
                    multiset(&c.dims_predicted),
                    ok(c.kaplansky_ok),
                    ok(c.identities_ok)
                ));
                if let Some(e) = &c.error {
                    out.push_str(&format!("       error: {e}\n"));
                }
            }
        }
        out
    }
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

/// `1^9 3^1` style rendering of a sorted multiset.
pub fn multiset(dims: &[usize]) -> String {
    if dims.is_empty() {
        return "-".into();
    }
    let mut parts = Vec::new();
    let mut i = 0;
    while i < dims.len() {
        let j = dims[i..].iter().take_while(|&&x| x == dims[i]).count();
        parts.push(format!("{}^{}", dims[i], j));
        i += j;
    }
    parts.join(" ")
}

/// Everything shared by the per-coset computations.
pub struct Engine {
    pub group: Arc<FiniteGroup>,
    pub h: Subgroup,
    pub twist: TwistData,
    pub duals: DualAlgebras,
    pub v1: ProjectiveRep,
    pub v2: ProjectiveRep,
    pub tol: f64,
}

/// The route through the twisted group algebra of K_g.
#[derive(Clone, Debug)]
pub struct Prediction {
    pub dims: Vec<usize>,
    pub w: ProjectiveRep,
    pub spectrum: WedderburnSpectrum,
}

impl Engine {
    /// Builds A_1*, A_2* and the projective representations V_1, V_2.
    pub fn new(group: Arc<FiniteGroup>, h: Subgroup, twist: TwistData, seed: u64, tol: f64) -> Result<Self> {
        let duals = build_a1_a2_star(&twist)?;
        let f1 = duals.a1.to_float();
        let f2 = duals.a2.to_float();
        let pi1 = with_retries(derive_seed(seed, 1, 0), |s| split_simple(&f1, s, tol))?;
        let pi2 = with_retries(derive_seed(seed, 1, 1), |s| split_simple(&f2, s, tol))?;
        let v1 = projective_rep_from_action(&duals.rho1, &pi1, tol)?;
        let v2 = projective_rep_from_action(&duals.rho2, &pi2, tol)?;
        Ok(Engine {
            group,
            h,
            twist,
            duals,
            v1,
            v2,
            tol,
        })
    }

    /// {(|H|/|K_g|)·d} over the spectrum of the twisted group algebra of c_W.
    pub fn predicted_spectrum(&self, g: usize, seed: u64) -> Result<Prediction> {
        let kg = stabilizer_kg(&self.h, g);
        let (hn, kn) = (self.h.len(), kg.len());
        if hn % kn != 0 {
            return Err(Error::Group(format!("|K_g| = {kn} does not divide |H| = {hn}")));
        }
        let w = pullback_and_tensor_cocycle(&self.group, &self.h, &self.v1, &self.v2, g, &kg, self.tol)?;
        let tga = twisted_group_algebra(&kg, &w.c, COMPOSITE_TOL)?;
        let spectrum = with_retries(seed, |s| wedderburn_dims_float(&tga, s, self.tol))?;
        let dims = spectrum.dims.iter().map(|d| d * (hn / kn)).collect();
        Ok(Prediction { dims, w, spectrum })
    }

    /// Spectrum of the plain group algebra of K.
    fn untwisted_spectrum(&self, kg: &Subgroup, seed: u64) -> Result<Vec<usize>> {
        let c = vec![C64::new(1.0, 0.0); kg.len() * kg.len()];
        let a = twisted_group_algebra(kg, &c, self.tol)?;
        Ok(with_retries(seed, |s| wedderburn_dims_float(&a, s, self.tol))?.dims)
    }

    /// All three routes for one double coset, with their audits.
    pub fn coset_report(&self, z: &DoubleCoset, seed: u64) -> Result<CosetSpectrum> {
        let grp = &*self.group;
        let g = z.representative;
        let kg = stabilizer_kg(&self.h, g);
        let (hn, kn) = (self.h.len(), kg.len());

        let block = build_block_algebra(grp, &self.h, &self.twist, z)?;
        let direct = with_retries(derive_seed(seed, 2, 0), |s| wedderburn_dims(&block, s, self.tol))?;

        let ug = invariant_algebra_ug(grp, &self.h, &self.duals, &kg, g)?;
        let invariant = with_retries(derive_seed(seed, 2, 1), |s| wedderburn_dims(&ug.algebra, s, self.tol))?;

        let fg = f_g_fibers(grp, &self.h, z, g)?;
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 2, 2));
        let fa: FgAudit = audit_f_g(grp, &self.h, z, &fg, &block, &ug, &self.duals, EQUIVARIANCE_SAMPLES, &mut rng)?;

        let pred = self.predicted_spectrum(g, derive_seed(seed, 2, 3))?;
        let trace_vanishing = trace_vanishing_check(&pred.w, hn, COMPOSITE_TOL);
        let mult = multiplicity_law(&pred.w, &pred.spectrum, hn);
        let coboundary_shortcut = if pred.spectrum.dims.contains(&1) {
            self.untwisted_spectrum(&kg, derive_seed(seed, 2, 4))? == pred.spectrum.dims
        } else {
            true
        };

        let second_rep = if z.len() > 1 {
            let others: Vec<usize> = z.elements.iter().copied().filter(|&x| x != g).collect();
            others[rng.random_range(0..others.len())]
        } else {
            g
        };
        let second = self.predicted_spectrum(second_rep, derive_seed(seed, 2, 5))?;

        let ug_dim = ug.algebra.dim();
        let checks = CosetChecks {
            f_homomorphism: fa.homomorphism,
            f_rank: fa.rank,
            f_injective: fa.injective,
            f_equivariant: fa.equivariant,
            image_equals_ug: fa.image_equals_ug,
            ug_dim,
            ug_dim_ok: ug_dim * kn == hn * hn,
            sum_squares_ok: direct.dims.iter().map(|d| d * d).sum::<usize>() == z.len(),
            trace_vanishing,
            multiplicity_law: mult.max_deviation < COMPOSITE_TOL,
            multiplicity_deviation: mult.max_deviation,
            coboundary_shortcut,
            second_rep,
            representative_invariance: second.dims == pred.dims,
        };
        let identities_ok = direct.dims == invariant.dims && invariant.dims == pred.dims && checks.passed();
        let kaplansky_ok = direct.dims.iter().all(|d| grp.order() % d == 0);
        Ok(CosetSpectrum {
            rep: g,
            size: z.len(),
            k_size: kn,
            dims_direct: direct.dims,
            dims_invariant: invariant.dims,
            dims_predicted: pred.dims,
            kaplansky_ok,
            identities_ok,
            checks,
            error: None,
        })
    }
}

/// Builds the instance described by `cfg` and runs the full pipeline.
pub fn run(cfg: &Config, verify_only: bool) -> Result<Report> {
    cfg.validate()?;
    let inst = Instance::build(&cfg.construction)?;
    Ok(full_report(&inst, cfg.seed.unwrap_or(0), cfg.tol, cfg.jobs, verify_only))
}

/// Global audits, then (unless `verify_only`) every double coset.
pub fn full_report(inst: &Instance, seed: u64, tol: f64, jobs: Option<usize>, verify_only: bool) -> Report {
    let mut checks = GlobalChecks::default();
    let mut details = GlobalDetails {
        group_order: inst.group.order(),
        h_order: inst.h.len(),
        ..Default::default()
    };
    let report = |checks, details, cosets| Report {
        instance: inst.description.clone(),
        seed,
        tol,
        global_checks: checks,
        details,
        cosets,
    };

    let twist = match inst.twist.clone().check() {
        Ok((audit, t)) => {
            checks.twist_axioms = audit.passed();
            details.failed_axioms = audit.failed().iter().map(|s| s.to_string()).collect();
            t
        }
        Err(e) => {
            details.errors.push(format!("twist audit: {e}"));
            None
        }
    };
    let Some(twist) = twist else {
        return report(checks, details, Vec::new());
    };
    checks.square_dim = twist.square_dimension_check();
    match twist.triangular_structure() {
        Ok(tri) => {
            checks.triangularity = true;
            checks.minimality_rank = tri.minimal;
            details.r_rank = Some(tri.rank);
        }
        Err(e) => details.errors.push(format!("triangularity: {e}")),
    }
    let q = match twist.q_element_and_antipode_check() {
        Ok(q) => {
            checks.q_identity = q.pass;
            Some(q)
        }
        Err(e) => {
            details.errors.push(format!("Q element: {e}"));
            None
        }
    };
    if verify_only || !checks.minimality_rank {
        return report(checks, details, Vec::new());
    }

    let grp = inst.group.clone();
    let h = inst.h.clone();
    let cosets = double_cosets(&h);
    details.coset_count = cosets.len();
    let mut seen = vec![false; grp.order()];
    let mut partition = true;
    for z in &cosets {
        for &x in &z.elements {
            partition &= !std::mem::replace(&mut seen[x], true);
        }
    }
    checks.block_partition = partition && seen.iter().all(|&s| s);

    let engine = match Engine::new(grp.clone(), h.clone(), twist, seed, tol) {
        Ok(e) => e,
        Err(e) => {
            details.errors.push(format!("dual algebras: {e}"));
            return report(checks, details, Vec::new());
        }
    };
    checks.dual_algebras = true;
    if let Some(q) = &q {
        match a2_to_a1op_map(&engine.twist, q, &engine.duals) {
            Ok(m) => checks.a2_a1op = m.audit.passed(),
            Err(e) => details.errors.push(format!("A_2* → A_1*^op: {e}")),
        }
    }
    let hn = h.len();
    checks.regular_character = (0..hn).all(|a| {
        let want = if a == 0 { hn } else { 0 };
        engine.duals.rho1.trace(a) == want && engine.duals.rho2.trace(a) == want
    });
    checks.projective_traces = [&engine.v1, &engine.v2].iter().all(|v| {
        (0..hn).all(|a| {
            let want = if a == 0 { hn as f64 } else { 0.0 };
            (v.trace(a).norm_sqr() - want).abs() < COMPOSITE_TOL
        })
    });
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 3, 0));
    checks.cross_coset_vanishing =
        cross_coset_products_vanish(&grp, &h, &engine.twist, &cosets, CROSS_COSET_SAMPLES, &mut rng);

    let work = |(i, z): (usize, &DoubleCoset)| -> CosetSpectrum {
        engine
            .coset_report(z, derive_seed(seed, 4, i as u64))
            .unwrap_or_else(|e| CosetSpectrum {
                rep: z.representative,
                size: z.len(),
                k_size: stabilizer_kg(&h, z.representative).len(),
                error: Some(e.to_string()),
                ..Default::default()
            })
    };
    let spectra: Vec<CosetSpectrum> = match jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| cosets.par_iter().enumerate().map(work).collect()),
            Err(e) => {
                details.errors.push(format!("thread pool: {e}"));
                cosets.iter().enumerate().map(work).collect()
            }
        },
        None => cosets.par_iter().enumerate().map(work).collect(),
    };
    checks.total_dimension = spectra
        .iter()
        .map(|c| c.dims_direct.iter().map(|d| d * d).sum::<usize>())
        .sum::<usize>()
        == grp.order();
    report(checks, details, spectra)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_rendering() {
        assert_eq!(multiset(&[1, 1, 1, 3]), "1^3 3^1");
        assert_eq!(multiset(&[]), "-");
    }

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1234567890123456), 0.123456789012);
        assert_eq!(sig12(0.0), 0.0);
    }

    #[test]
    fn retries_stop_on_success() {
        let mut calls = 0;
        let r = with_retries(7, |_| {
            calls += 1;
            if calls < 3 {
                Err(Error::Retryable("x".into()))
            } else {
                Ok(calls)
            }
        });
        assert_eq!(r.unwrap(), 3);
        let mut calls = 0;
        let r: Result<()> = with_retries(7, |_| {
            calls += 1;
            Err(Error::Retryable("x".into()))
        });
        assert!(r.is_err());
        assert_eq!(calls, MAX_RETRIES as usize + 1);
    }

    #[test]
    fn config_rejects_even_p() {
        assert!(Config::symplectic(2, 1, vec![]).validate().is_err());
        assert!(Config::symplectic(9, 1, vec![]).validate().is_err());
        assert!(Config::symplectic(3, 1, vec![vec![vec![1, 0]]]).validate().is_err());
    }

    #[test]
    fn example_det_two() {
        let cfg = Config::symplectic(3, 1, vec![vec![vec![1, 0], vec![0, 2]]]);
        let r = run(&cfg, false).unwrap();
        assert!(r.passed(false), "{}", r.to_table());
        assert_eq!(r.cosets.len(), 2);
        assert_eq!(r.cosets[0].dims_direct, vec![1; 9]);
        assert_eq!(r.cosets[1].dims_direct, vec![3]);
    }
}
