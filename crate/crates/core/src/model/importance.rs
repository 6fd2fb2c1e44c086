use crate::features::FeatureSchema;

use super::logreg::LogRegModel;
use super::ModelError;

/// A family name and its ranked `(dimension, weight)` pairs.
pub type FamilyRanking = (String, Vec<(String, f64)>);

/// For each requested family, the `top_k` dimensions by absolute weight
/// (ties broken by name), with their signed weights.
pub fn feature_importance(
    model: &LogRegModel,
    schema: &FeatureSchema,
    top_k: usize,
    families: &[&str],
) -> Result<Vec<FamilyRanking>, ModelError> {
    if schema.len() != model.weights.len() {
        return Err(ModelError::DimensionMismatch {
            expected: model.weights.len(),
            found: schema.len(),
        });
    }
    families
        .iter()
        .map(|&family| {
            let idx = schema.family_indices(family);
            if idx.is_empty() {
                return Err(ModelError::UnknownFamily(family.to_owned()));
            }
            let mut ranked: Vec<(String, f64)> = idx
                .into_iter()
                .map(|i| (schema.dims[i].name.clone(), model.weights[i]))
                .collect();
            ranked.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()).then_with(|| a.0.cmp(&b.0)));
            ranked.truncate(top_k);
            Ok((family.to_owned(), ranked))
        })
        .collect()
}
