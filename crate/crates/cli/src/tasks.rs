//! Task execution: every task runs independently; failures are recorded per
//! task without aborting the batch.

use vgenus::algebra::rational::rat_to_string;
use vgenus::elliptic::{ell_vir, jacobi_shift_check, EllResult};
use vgenus::genera::{chern_number, chi_minus_y, chi_vir, euler_signature, ChiYPolynomial};
use vgenus::ktheory::KClass;
use vgenus::localization::{euler_additivity, localized_chi, localized_chi_y, localized_elliptic};
use vgenus::verify::checks;

use crate::doc::{Loaded, TaskOutcome, TaskSpec};

fn y_poly_strings(p: &ChiYPolynomial) -> Vec<String> {
    p.coeffs.iter().map(rat_to_string).collect()
}

fn q_series_entries(r: &EllResult) -> Vec<(usize, Vec<(i64, String)>)> {
    r.serialize()
        .into_iter()
        .map(|(k, terms)| {
            (
                k,
                terms
                    .into_iter()
                    .map(|(e, c)| (e, rat_to_string(&c)))
                    .collect(),
            )
        })
        .collect()
}

impl Loaded {
    fn coefficient_bundle(&self, name: &Option<String>) -> KClass {
        match name {
            Some(n) => self.bundles[n].clone(),
            None => KClass::trivial(&self.space.model, 1),
        }
    }

    /// Execute one task; integrality warnings are appended to `warnings`.
    pub fn run_task(&self, spec: &TaskSpec, warnings: &mut Vec<String>) -> TaskOutcome {
        let name = spec.name();
        let out = TaskOutcome::ok(name.clone());
        let result: Result<TaskOutcome, String> = (|| match spec {
            TaskSpec::Chi { bundle } => {
                let v = self.coefficient_bundle(bundle);
                let value = chi_vir(&self.space, &v).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&value)),
                    ..out
                })
            }
            TaskSpec::ChiY { bundle } => {
                let v = self.coefficient_bundle(bundle);
                let poly = chi_minus_y(&self.space, &v).map_err(|e| e.to_string())?;
                if !poly.is_integral() {
                    warnings.push(format!(
                            "{name}: chi_-y has non-integral coefficients (the functional need not be geometric)"
                        ));
                }
                Ok(TaskOutcome {
                    y_polynomial: Some(y_poly_strings(&poly)),
                    ..out
                })
            }
            TaskSpec::Euler => {
                let (e, _) = euler_signature(&self.space).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&e)),
                    ..out
                })
            }
            TaskSpec::Signature => {
                let (_, s) = euler_signature(&self.space).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&s)),
                    ..out
                })
            }
            TaskSpec::ChernNumber { partition } => {
                let value = chern_number(&self.space, partition).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&value)),
                    ..out
                })
            }
            TaskSpec::Elliptic { bundle, class } => {
                let v = bundle.as_ref().map(|n| self.bundles[n].clone());
                let a = class.as_ref().map(|n| self.classes[n].clone());
                let r = ell_vir(&self.space, v.as_ref(), a.as_ref(), self.options.q_order)
                    .map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    q_series: Some(q_series_entries(&r)),
                    ..out
                })
            }
            TaskSpec::JacobiCheck => {
                let r = ell_vir(&self.space, None, None, self.options.q_order)
                    .map_err(|e| e.to_string())?;
                jacobi_shift_check(&r).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    report: Some("shift identities hold through the truncation".into()),
                    ..out
                })
            }
            TaskSpec::LocalizedChi => {
                let w = self.window()?;
                let loc = localized_chi(&self.components, &w).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&loc.value)),
                    eps_series: Some(
                        loc.series_window
                            .iter()
                            .map(|(e, c)| (*e, rat_to_string(c)))
                            .collect(),
                    ),
                    ..out
                })
            }
            TaskSpec::LocalizedChiY => {
                let w = self.window()?;
                let poly = localized_chi_y(&self.components, &w).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    y_polynomial: Some(y_poly_strings(&poly)),
                    ..out
                })
            }
            TaskSpec::LocalizedElliptic => {
                let w = self.window()?;
                let r = localized_elliptic(&self.components, &w, self.options.q_order)
                    .map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    q_series: Some(q_series_entries(&r)),
                    ..out
                })
            }
            TaskSpec::EulerAdditivity => {
                let value = euler_additivity(&self.components).map_err(|e| e.to_string())?;
                Ok(TaskOutcome {
                    value: Some(rat_to_string(&value)),
                    ..out
                })
            }
            TaskSpec::Check { property, bundle } => {
                let v = self.coefficient_bundle(bundle);
                let x = &self.space;
                let q = self.options.q_order;
                let outcome = match property.as_str() {
                    "chi_y_leading" => checks::chi_y_leading(x),
                    "chi_y_oracle" => checks::chi_y_oracle(x, &v),
                    "symmetry" => checks::symmetry(x, &v),
                    "serre_duality" => checks::serre_duality(x, &v),
                    "specialization_y0" => checks::specialization_y0(x, &v),
                    "hopf_signature" => checks::hopf_and_signature(x, &v),
                    "elliptic_q0_s1" => checks::elliptic_q0_and_s1(x, q),
                    "jacobi" => checks::jacobi(x, q),
                    other => Err(format!("unknown property `{other}`")),
                };
                outcome?;
                Ok(TaskOutcome {
                    report: Some("check passed".into()),
                    ..out
                })
            }
        })();
        result.unwrap_or_else(|message| TaskOutcome::error(name, message))
    }
}
