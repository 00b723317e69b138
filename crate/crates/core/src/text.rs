//! Participant-facing strings, loaded from a TOML template file so the
//! wording can be localised without touching code.

use std::sync::LazyLock;

use serde::Deserialize;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Deserialize)]
pub struct Templates {
    pub elicitation: ElicitationText,
    pub analogy: AnalogyText,
    pub posterior: PosteriorText,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ElicitationText {
    pub summary: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AnalogyText {
    pub prior_richer: String,
    pub data_richer: String,
    pub equal: String,
    pub explanation: String,
}

#[derive(Debug, Clone, Deserialize)]
pub struct PosteriorText {
    pub explanation: String,
}

static ENGLISH: LazyLock<Templates> = LazyLock::new(|| {
    Templates::parse(include_str!("../assets/text.en.toml")).expect("bundled templates parse")
});

impl Templates {
    pub fn parse(source: &str) -> Result<Self> {
        toml::from_str(source).or_else(|e| invalid(format!("bad template file: {e}")))
    }

    pub fn english() -> &'static Templates {
        &ENGLISH
    }
}

/// Replace each `{key}` in `template` with its value.
pub fn render(template: &str, values: &[(&str, &str)]) -> String {
    let mut out = template.to_owned();
    for (key, value) in values {
        out = out.replace(&format!("{{{key}}}"), value);
    }
    out
}

/// A number with one decimal, without a trailing ".0".
pub fn one_decimal(x: f64) -> String {
    let s = format!("{x:.1}");
    match s.strip_suffix(".0") {
        Some(whole) => whole.to_owned(),
        None => s,
    }
}

/// A proportion in [0, 1] as a percentage with at most one decimal.
pub fn percent(p: f64) -> String {
    one_decimal(100.0 * p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_templates_load() {
        let t = Templates::english();
        assert!(t.analogy.prior_richer.contains("{multiplier}"));
    }

    #[test]
    fn rendering_and_formatting() {
        assert_eq!(render("a {x} b {y} {x}", &[("x", "1"), ("y", "2")]), "a 1 b 2 1");
        assert_eq!(percent(0.15), "15");
        assert_eq!(percent(0.155), "15.5");
        assert_eq!(one_decimal(2.0), "2");
        assert_eq!(one_decimal(2.46), "2.5");
    }

    #[test]
    fn custom_locale() {
        let src = include_str!("../assets/text.en.toml").replace("Your prior beliefs have", "Tus creencias tienen");
        let t = Templates::parse(&src).unwrap();
        assert!(t.analogy.prior_richer.starts_with("Tus creencias"));
        assert!(Templates::parse("[analogy]").is_err());
    }
}
