//! The declarative input document and its validation, plus the output
//! document. Rationals travel as strings `p/q`, polynomial expressions as
//! strings over the declared generators; both directions are exact.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use vgenus::algebra::chow::{ChowClass, ChowModel, IntegralFunctional};
use vgenus::algebra::expr::{class_to_string, monomial_to_string, parse_class, parse_monomial};
use vgenus::algebra::rational::{rat_from_str, rat_to_string, Rational};
use vgenus::algebra::ring::RatRing;
use vgenus::algebra::Generator;
use vgenus::genera::VirtualSpace;
use vgenus::ktheory::{Bundle, KClass};
use vgenus::localization::{EpsWindow, EquivariantBundle, FixedComponent, MovingPart};
use vgenus::verify::CounterInstance;

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct InputDoc {
    pub model: ModelSpec,
    pub integral: Vec<IntegralEntry>,
    pub obstruction_theory: ObstructionSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub bundles: BTreeMap<String, BundleSpec>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub classes: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub fixed_components: Vec<ComponentSpec>,
    pub tasks: Vec<TaskSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ModelSpec {
    pub generators: Vec<GeneratorSpec>,
    pub virtual_dimension: u32,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct IntegralEntry {
    pub monomial: String,
    pub value: String,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ObstructionSpec {
    pub e0: BundleSpec,
    pub e1: BundleSpec,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BundleSpec {
    pub rank: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub chern: Vec<String>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ComponentSpec {
    pub model: ModelSpec,
    pub integral: Vec<IntegralEntry>,
    pub e0: BundleSpec,
    pub e1: BundleSpec,
    #[serde(default)]
    pub normal: NormalSpec,
    /// defaults to a single weight-0 trivial line (the lift of O)
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub v_lift: Vec<BlockSpec>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
pub struct NormalSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pos: Vec<BlockSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub neg: Vec<BlockSpec>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct BlockSpec {
    pub weight: i64,
    pub bundle: BundleSpec,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum TaskSpec {
    Chi {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bundle: Option<String>,
    },
    ChiY {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bundle: Option<String>,
    },
    Euler,
    Signature,
    ChernNumber {
        partition: Vec<u32>,
    },
    Elliptic {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bundle: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        class: Option<String>,
    },
    JacobiCheck,
    LocalizedChi,
    LocalizedChiY,
    LocalizedElliptic,
    EulerAdditivity,
    Check {
        property: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bundle: Option<String>,
    },
}

impl TaskSpec {
    pub fn name(&self) -> String {
        match self {
            TaskSpec::Chi { .. } => "chi".into(),
            TaskSpec::ChiY { .. } => "chi_y".into(),
            TaskSpec::Euler => "euler".into(),
            TaskSpec::Signature => "signature".into(),
            TaskSpec::ChernNumber { .. } => "chern_number".into(),
            TaskSpec::Elliptic { .. } => "elliptic".into(),
            TaskSpec::JacobiCheck => "jacobi_check".into(),
            TaskSpec::LocalizedChi => "localized_chi".into(),
            TaskSpec::LocalizedChiY => "localized_chi_y".into(),
            TaskSpec::LocalizedElliptic => "localized_elliptic".into(),
            TaskSpec::EulerAdditivity => "euler_additivity".into(),
            TaskSpec::Check { property, .. } => format!("check:{property}"),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(default)]
pub struct Options {
    pub q_order: usize,
    pub eps_lo: Option<i64>,
    pub eps_hi: Option<i64>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            q_order: 6,
            eps_lo: None,
            eps_hi: None,
            seed: 0,
        }
    }
}

/// Fully validated document, ready to execute.
pub struct Loaded {
    pub space: VirtualSpace,
    pub bundles: BTreeMap<String, KClass>,
    pub classes: BTreeMap<String, ChowClass<RatRing>>,
    pub components: Vec<FixedComponent>,
    pub tasks: Vec<TaskSpec>,
    pub options: Options,
}

fn fail(path: &str, what: impl std::fmt::Display) -> String {
    format!("{path}: {what}")
}

fn build_model(spec: &ModelSpec, path: &str) -> Result<Arc<ChowModel>, String> {
    let gens = spec
        .generators
        .iter()
        .map(|g| Generator {
            name: g.name.clone(),
            degree: g.degree,
        })
        .collect();
    ChowModel::new(gens, spec.virtual_dimension).map_err(|e| fail(path, e))
}

fn build_rational(s: &str, path: &str) -> Result<Rational, String> {
    rat_from_str(s).ok_or_else(|| fail(path, format!("`{s}` is not a rational p/q")))
}

fn build_integral(
    model: &Arc<ChowModel>,
    entries: &[IntegralEntry],
    path: &str,
) -> Result<IntegralFunctional, String> {
    let mut values = Vec::new();
    for (i, e) in entries.iter().enumerate() {
        let mono = parse_monomial(model, &e.monomial)
            .map_err(|err| fail(&format!("{path}[{i}].monomial"), err))?;
        let value = build_rational(&e.value, &format!("{path}[{i}].value"))?;
        values.push((mono, value));
    }
    IntegralFunctional::new(model, values).map_err(|e| fail(path, e))
}

fn build_bundle(model: &Arc<ChowModel>, spec: &BundleSpec, path: &str) -> Result<Bundle, String> {
    let mut chern = Vec::new();
    for (i, expr) in spec.chern.iter().enumerate() {
        let class = parse_class(model, expr).map_err(|e| fail(&format!("{path}.chern[{i}]"), e))?;
        chern.push(class);
    }
    Bundle::new(model, spec.rank, chern).map_err(|e| fail(path, e))
}

fn build_blocks(
    model: &Arc<ChowModel>,
    blocks: &[BlockSpec],
    path: &str,
) -> Result<EquivariantBundle, String> {
    let mut out = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        out.push((
            b.weight,
            build_bundle(model, &b.bundle, &format!("{path}[{i}].bundle"))?,
        ));
    }
    EquivariantBundle::new(out).map_err(|e| fail(path, e))
}

pub fn load(doc: &InputDoc) -> Result<Loaded, String> {
    let model = build_model(&doc.model, "model")?;
    let integral = build_integral(&model, &doc.integral, "integral")?;
    let e0 = build_bundle(&model, &doc.obstruction_theory.e0, "obstruction_theory.e0")?;
    let e1 = build_bundle(&model, &doc.obstruction_theory.e1, "obstruction_theory.e1")?;
    let space =
        VirtualSpace::new(&model, e0, e1, integral).map_err(|e| fail("obstruction_theory", e))?;

    let mut bundles = BTreeMap::new();
    for (name, spec) in &doc.bundles {
        let b = build_bundle(&model, spec, &format!("bundles.{name}"))?;
        bundles.insert(name.clone(), KClass::of_bundle(&b));
    }
    let mut classes = BTreeMap::new();
    for (name, expr) in &doc.classes {
        let class = parse_class(&model, expr).map_err(|e| fail(&format!("classes.{name}"), e))?;
        classes.insert(name.clone(), class);
    }

    let mut components = Vec::new();
    for (i, spec) in doc.fixed_components.iter().enumerate() {
        let path = format!("fixed_components[{i}]");
        let cmodel = build_model(&spec.model, &format!("{path}.model"))?;
        let cintegral = build_integral(&cmodel, &spec.integral, &format!("{path}.integral"))?;
        let ce0 = build_bundle(&cmodel, &spec.e0, &format!("{path}.e0"))?;
        let ce1 = build_bundle(&cmodel, &spec.e1, &format!("{path}.e1"))?;
        let cspace = VirtualSpace::new(&cmodel, ce0, ce1, cintegral).map_err(|e| fail(&path, e))?;
        let pos = build_blocks(&cmodel, &spec.normal.pos, &format!("{path}.normal.pos"))?;
        let neg = build_blocks(&cmodel, &spec.normal.neg, &format!("{path}.normal.neg"))?;
        let normal = MovingPart::new(pos, neg).map_err(|e| fail(&format!("{path}.normal"), e))?;
        let v_lift = if spec.v_lift.is_empty() {
            EquivariantBundle::new(vec![(0, Bundle::trivial(&cmodel, 1))]).unwrap()
        } else {
            build_blocks(&cmodel, &spec.v_lift, &format!("{path}.v_lift"))?
        };
        components.push(FixedComponent::new(cspace, normal, v_lift).map_err(|e| fail(&path, e))?);
    }

    // dimension consistency of components against the global model
    if !components.is_empty() {
        let d = vgenus::localization::global_dim(&components)
            .map_err(|e| fail("fixed_components", e))?;
        if d != model.dim {
            return Err(fail(
                "fixed_components",
                format!(
                    "components assemble to global dimension {d}, document declares {}",
                    model.dim
                ),
            ));
        }
    }

    // referenced names must resolve
    for (i, t) in doc.tasks.iter().enumerate() {
        let path = format!("tasks[{i}]");
        let check_bundle = |name: &Option<String>| -> Result<(), String> {
            if let Some(n) = name {
                if !bundles.contains_key(n) {
                    return Err(fail(&path, format!("unknown bundle `{n}`")));
                }
            }
            Ok(())
        };
        match t {
            TaskSpec::Chi { bundle }
            | TaskSpec::ChiY { bundle }
            | TaskSpec::Check { bundle, .. } => check_bundle(bundle)?,
            TaskSpec::Elliptic { bundle, class } => {
                check_bundle(bundle)?;
                if let Some(c) = class {
                    if !classes.contains_key(c) {
                        return Err(fail(&path, format!("unknown class `{c}`")));
                    }
                }
            }
            TaskSpec::LocalizedChi
            | TaskSpec::LocalizedChiY
            | TaskSpec::LocalizedElliptic
            | TaskSpec::EulerAdditivity
                if components.is_empty() =>
            {
                return Err(fail(&path, "no fixed_components in the document"));
            }
            _ => {}
        }
    }

    Ok(Loaded {
        space,
        bundles,
        classes,
        components,
        tasks: doc.tasks.clone(),
        options: doc.options.clone(),
    })
}

impl Loaded {
    pub fn window(&self) -> Result<EpsWindow, String> {
        let mut w =
            vgenus::localization::default_window(&self.components).map_err(|e| e.to_string())?;
        if let Some(lo) = self.options.eps_lo {
            w.lo = lo;
        }
        if let Some(hi) = self.options.eps_hi {
            w.hi = hi;
        }
        if w.lo > 0 || w.hi < 0 {
            return Err(format!(
                "epsilon window [{}, {}] must contain 0",
                w.lo, w.hi
            ));
        }
        Ok(w)
    }
}

/// Results: exact rationals and polynomials as strings, series as nested
/// exponent/coefficient lists. Deterministic for a fixed document.
#[derive(Clone, Debug, Serialize)]
pub struct OutputDoc {
    pub results: Vec<TaskOutcome>,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<Vec<u128>>,
}

pub type QSeriesEntries = Vec<(usize, Vec<(i64, String)>)>;

#[derive(Clone, Debug, Serialize)]
pub struct TaskOutcome {
    pub task: String,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    /// coefficients of the y-polynomial, constant term first
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_polynomial: Option<Vec<String>>,
    /// (q-exponent, [(s-exponent, coefficient)])
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_series: Option<QSeriesEntries>,
    /// (eps-exponent, coefficient) of the localized series inside the window
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_series: Option<Vec<(i64, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TaskOutcome {
    pub fn ok(task: String) -> Self {
        TaskOutcome {
            task,
            status: "ok",
            value: None,
            y_polynomial: None,
            q_series: None,
            eps_series: None,
            report: None,
            error: None,
        }
    }

    pub fn error(task: String, message: String) -> Self {
        TaskOutcome {
            error: Some(message),
            status: "error",
            ..TaskOutcome::ok(task)
        }
    }
}

fn bundle_spec(b: &Bundle) -> BundleSpec {
    BundleSpec {
        rank: b.rank,
        chern: (1..=b.rank.min(b.model.dim))
            .map(|k| class_to_string(&b.chern(k)))
            .collect(),
    }
}

/// Serialize a failing verify instance as a runnable input document whose
/// single task re-executes the violated check.
pub fn counterexample_doc(ci: &CounterInstance) -> InputDoc {
    let model = &ci.space.model;
    let model_spec = ModelSpec {
        generators: model
            .generators
            .iter()
            .map(|g| GeneratorSpec {
                name: g.name.clone(),
                degree: g.degree,
            })
            .collect(),
        virtual_dimension: model.dim,
    };
    let integral = ci
        .space
        .integral
        .values
        .iter()
        .map(|(m, v)| IntegralEntry {
            monomial: monomial_to_string(model, m),
            value: rat_to_string(v),
        })
        .collect();
    let mut bundles = BTreeMap::new();
    if let Some(v) = &ci.v {
        bundles.insert("V".to_string(), bundle_spec(v));
    }
    InputDoc {
        model: model_spec,
        integral,
        obstruction_theory: ObstructionSpec {
            e0: bundle_spec(&ci.space.e0),
            e1: bundle_spec(&ci.space.e1),
        },
        bundles,
        classes: BTreeMap::new(),
        fixed_components: vec![],
        tasks: vec![TaskSpec::Check {
            property: ci.property.clone(),
            bundle: ci.v.as_ref().map(|_| "V".to_string()),
        }],
        options: Options::default(),
    }
}
