//! The golden corpus: every example model and map, as file name and JSON text.

use sdcm_core::examples::{
    decreasing_equal, decreasing_strict, iterated_model, square_zero_model, trivial_extension_phi,
};
use sdcm_core::{HomomorphismDescriptor, LaurentSeries, SdcModel};

use crate::format::{model_json, phi_json};

pub fn models() -> Vec<SdcModel> {
    let mut out = Vec::new();
    for r in 2..=6 {
        out.push(square_zero_model(r));
    }
    for r in 2..=4 {
        for s in 2..=4 {
            out.push(iterated_model(r, s));
        }
    }
    for sp in [decreasing_strict(), decreasing_equal()] {
        out.push(sp.big);
        out.push(sp.small);
    }
    out
}

pub fn maps() -> Vec<(String, HomomorphismDescriptor)> {
    let mut out = Vec::new();
    for s in 2..=4 {
        out.push((
            format!("phi_trivial_extension_{s}.json"),
            trivial_extension_phi("square0_2", s),
        ));
    }
    out.push((
        "phi_gorenstein.json".to_string(),
        HomomorphismDescriptor::new("gorenstein", LaurentSeries::monomial(2), "square0_2", "S"),
    ));
    out
}

/// `(file name, contents)` in a fixed order.
pub fn files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = models()
        .iter()
        .map(|m| (format!("{}.json", m.name()), model_json(m)))
        .collect();
    out.extend(maps().iter().map(|(f, phi)| (f.clone(), phi_json(phi))));
    out
}
