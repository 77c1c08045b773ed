//! Reading documents from arguments: inline JSON, `-` for stdin, a file
//! path, or a shorthand.

use std::io::Read;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use super::CliError;
use crate::cone::{zobel, ClassDoc, ConeDoc, ConeVariety, Mode};
use crate::perversity::{GeneralizedBound, Perversity};
use crate::strata::Stratification;

/// The text of an argument: itself when it looks like JSON, stdin for `-`,
/// the file's contents when it names a file, otherwise `None`.
pub fn load(arg: &str) -> Result<Option<String>, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(Some(arg.to_string()));
    }
    if arg == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        return Ok(Some(text));
    }
    let path = std::path::Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map(Some).map_err(|e| CliError::Io(format!("{arg}: {e}")));
    }
    Ok(None)
}

pub fn json<T: DeserializeOwned>(what: &'static str, arg: &str) -> Result<T, CliError> {
    let text = load(arg)?.ok_or_else(|| CliError::Input { what, message: format!("{arg:?} is not JSON or a readable file") })?;
    serde_json::from_str(&text).map_err(|e| CliError::Input { what, message: e.to_string() })
}

fn suffix_number(arg: &str, prefix: &str) -> Option<usize> {
    arg.strip_prefix(prefix).and_then(|n| n.parse().ok())
}

/// `vertex<d>`, `smooth<d>`, or a stratification document.
pub fn strata(arg: &str) -> Result<Stratification, CliError> {
    if let Some(d) = suffix_number(arg, "vertex") {
        return Stratification::isolated_vertex(d).map_err(|e| CliError::domain("strata", e));
    }
    if let Some(d) = suffix_number(arg, "smooth") {
        return Ok(Stratification::smooth(d));
    }
    json("strata", arg)
}

/// `zero`, `top` (at the given depth), `zero<d>`, `top<d>`, or an integer array.
pub fn bound(arg: &str, depth: usize) -> Result<GeneralizedBound, CliError> {
    let named = |kind: &str| -> Option<usize> {
        if arg == kind {
            Some(depth)
        } else {
            suffix_number(arg, kind)
        }
    };
    let value = if let Some(d) = named("zero") {
        Perversity::zero(d).map(|p| p.as_bound())
    } else if let Some(d) = named("top") {
        Perversity::top(d).map(|p| p.as_bound())
    } else {
        let raw: Vec<i64> = json("bound", arg)?;
        GeneralizedBound::new(raw)
    };
    let b = value.map_err(|e| CliError::domain("bound", e))?;
    if b.depth() != depth {
        return Err(CliError::Input { what: "bound", message: format!("depth {} does not match the stratification depth {depth}", b.depth()) });
    }
    Ok(b)
}

pub fn perversity(arg: &str, depth: usize) -> Result<Perversity, CliError> {
    let b = bound(arg, depth)?;
    b.to_perversity().ok_or_else(|| CliError::Input {
        what: "perversity",
        message: format!("{b} is not a perversity (needs p_1 = 0 and steps of 0 or 1)"),
    })
}

/// `zobel`, a built-in base name such as `P2` or `quadric_surface`, or a cone document.
pub fn cone(arg: &str) -> Result<ConeVariety, CliError> {
    if arg == "zobel" {
        return Ok(zobel().cone);
    }
    let doc: ConeDoc = match load(arg)? {
        Some(text) => serde_json::from_str(&text).map_err(|e| CliError::Input { what: "cone", message: e.to_string() })?,
        None => ConeDoc { base: crate::cone::BaseDoc::Name(arg.to_string()) },
    };
    ConeVariety::from_doc(doc).map_err(|e| CliError::domain("cone", e))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FullClassDoc {
    #[serde(default)]
    #[allow(dead_code)]
    schema: Option<u32>,
    cone: ConeDoc,
    class: ClassDoc,
}

/// A cone class from `mode:r[:p]:(c1,c2,..)`, a Zobel name (`L`, `M`, `N`,
/// `D`, `Q`), a `{"r","p","payload"}` document, or a full
/// `{"cone": .., "class": ..}` document.
///
/// In the short form `p` defaults to `d − r` for allowed classes and `0`
/// for disallowed ones.
pub fn class(arg: &str, cone: Option<&ConeVariety>) -> Result<(ConeVariety, crate::cone::ConeClass), CliError> {
    let need_cone = || cone.cloned().ok_or(CliError::Missing("--cone"));
    let domain = |e| CliError::domain("class", e);
    if let Some(text) = load(arg)? {
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Input { what: "class", message: e.to_string() })?;
        if value.get("class").is_some() {
            let full: FullClassDoc =
                serde_json::from_value(value).map_err(|e| CliError::Input { what: "class", message: e.to_string() })?;
            let own = ConeVariety::from_doc(full.cone).map_err(|e| CliError::domain("cone", e))?;
            if let Some(c) = cone {
                if c != &own {
                    return Err(CliError::Input { what: "class", message: "class document names a different cone than --cone".into() });
                }
            }
            let k = own.class_from_doc(full.class).map_err(domain)?;
            return Ok((own, k));
        }
        let doc: ClassDoc =
            serde_json::from_value(value).map_err(|e| CliError::Input { what: "class", message: e.to_string() })?;
        let c = need_cone()?;
        let k = c.class_from_doc(doc).map_err(domain)?;
        return Ok((c, k));
    }
    let c = need_cone()?;
    let z = zobel();
    if c == z.cone {
        let named = match arg {
            "L" => Some(z.l),
            "M" => Some(z.m),
            "N" => Some(z.n),
            "D" => Some(z.d),
            "Q" => Some(z.q),
            _ => None,
        };
        if let Some(k) = named {
            return Ok((c, k));
        }
    }
    let k = short_class(arg, &c)?;
    Ok((c, k))
}

fn short_class(arg: &str, cone: &ConeVariety) -> Result<crate::cone::ConeClass, CliError> {
    let bad = |message: String| CliError::Input { what: "class", message };
    let open = arg.find('(').ok_or_else(|| bad(format!("{arg:?}: expected mode:r[:p]:(coefficients)")))?;
    let inner = arg[open..]
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad(format!("{arg:?}: unbalanced coefficient list")))?;
    let payload = inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i64>().map_err(|_| bad(format!("{s:?} is not an integer"))))
        .collect::<Result<Vec<_>, _>>()?;
    let head: Vec<&str> = arg[..open].trim_end_matches(':').split(':').collect();
    let mode = match head.first().copied() {
        Some("allowed") => Mode::Allowed,
        Some("disallowed") => Mode::Disallowed,
        _ => return Err(bad(format!("{arg:?}: mode must be allowed or disallowed"))),
    };
    let number = |s: &str| s.parse::<i64>().map_err(|_| bad(format!("{s:?} is not an integer")));
    let (r, p) = match head.len() {
        2 => {
            let r = number(head[1])?;
            let p = match mode {
                Mode::Allowed => cone.dim() as i64 - r,
                Mode::Disallowed => 0,
            };
            (r, p)
        }
        3 => (number(head[1])?, number(head[2])?),
        _ => return Err(bad(format!("{arg:?}: expected mode:r[:p]:(coefficients)"))),
    };
    let p = u32::try_from(p).map_err(|_| bad(format!("vertex bound {p} is negative")))?;
    let k = cone.class(r, p, payload).map_err(|e| CliError::domain("class", e))?;
    if k.mode() != mode {
        return Err(bad(format!("a class with r = {r}, p = {p} on a cone of dimension {} is {}, not {mode}", cone.dim(), k.mode())));
    }
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shorthands() {
        assert_eq!(strata("vertex3").unwrap(), Stratification::isolated_vertex(3).unwrap());
        assert_eq!(bound("zero", 3).unwrap(), GeneralizedBound::zero(3).unwrap());
        assert_eq!(bound("top3", 3).unwrap().entries(), &[0, 1, 2]);
        assert!(bound("[0,0]", 3).is_err());
        assert!(perversity("[0,2,2]", 3).is_err());
        let y = cone("zobel").unwrap();
        assert_eq!(cone("quadric_surface").unwrap(), y);
        assert_eq!(cone(r#"{"base":"quadric"}"#).unwrap(), y);
    }

    #[test]
    fn class_forms() {
        let y = cone("zobel").unwrap();
        let (_, a) = class("allowed:2:(1,0)", Some(&y)).unwrap();
        assert_eq!((a.r(), a.p(), a.payload().coeffs()), (2, 1, &[1, 0][..]));
        let (_, b) = class("disallowed:1:(0,1)", Some(&y)).unwrap();
        assert_eq!(b, zobel().m);
        let (_, n) = class("N", Some(&y)).unwrap();
        assert_eq!(n, zobel().n);
        let (_, c) = class("allowed:2:2:(3,4)", Some(&y)).unwrap();
        assert_eq!(c.p(), 2);
        assert!(class("allowed:1:0:(1,0)", Some(&y)).is_err());
        assert!(class("sideways:1:(1)", Some(&y)).is_err());
        assert!(matches!(class("allowed:2:(1,0)", None), Err(CliError::Missing(_))));
        let (own, k) = class(r#"{"cone":{"base":"P2"},"class":{"r":2,"p":0,"payload":[1]}}"#, None).unwrap();
        assert_eq!((own.dim(), k.r()), (3, 2));
        let (_, j) = class(r#"{"r":1,"p":0,"payload":[1,0]}"#, Some(&y)).unwrap();
        assert_eq!(j, zobel().l);
    }
}
