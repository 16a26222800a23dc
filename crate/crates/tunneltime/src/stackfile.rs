//! Line-oriented stack definition files.
//!
//! ```text
//! # Berkeley tunnel barrier
//! ambient 1
//! layer 2.22 78.82882882882883
//! layer 1.45 120.68965517241379
//! substrate 1.45
//! ```
//!
//! `#` starts a comment, blank lines are ignored, numbers are decimal with
//! optional exponent. `ambient` must come first, `substrate` last, with any
//! number of `layer` lines in between. Written files round-trip to an
//! identical stack (floats are printed with shortest round-trip precision).

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::optics::{Layer, LayerStack, Medium};

pub fn parse_stack(text: &str, path: &str) -> Result<LayerStack> {
    let err = |line: usize, message: String| Error::StackFile {
        path: path.to_string(),
        line,
        message,
    };

    let mut ambient: Option<Medium> = None;
    let mut substrate: Option<Medium> = None;
    let mut layers: Vec<Layer> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let keyword = fields.next().unwrap();
        let mut number = |what: &str| -> Result<f64> {
            let word = fields
                .next()
                .ok_or_else(|| err(lineno, format!("missing {what}")))?;
            word.parse::<f64>()
                .map_err(|_| err(lineno, format!("bad {what} '{word}'")))
        };
        match keyword {
            "ambient" => {
                if ambient.is_some() {
                    return Err(err(lineno, "duplicate 'ambient' line".into()));
                }
                if !layers.is_empty() || substrate.is_some() {
                    return Err(err(lineno, "'ambient' must be the first entry".into()));
                }
                ambient = Some(Medium::new(number("refractive index")?).map_err(map_invalid(
                    path, lineno,
                ))?);
            }
            "layer" => {
                if ambient.is_none() {
                    return Err(err(lineno, "'layer' before 'ambient'".into()));
                }
                if substrate.is_some() {
                    return Err(err(lineno, "'layer' after 'substrate'".into()));
                }
                let n = number("refractive index")?;
                let d = number("thickness (nm)")?;
                let medium = Medium::new(n).map_err(map_invalid(path, lineno))?;
                layers.push(Layer::new(medium, d).map_err(map_invalid(path, lineno))?);
            }
            "substrate" => {
                if ambient.is_none() {
                    return Err(err(lineno, "'substrate' before 'ambient'".into()));
                }
                if substrate.is_some() {
                    return Err(err(lineno, "duplicate 'substrate' line".into()));
                }
                substrate = Some(Medium::new(number("refractive index")?).map_err(
                    map_invalid(path, lineno),
                )?);
            }
            other => {
                return Err(err(lineno, format!("unknown keyword '{other}'")));
            }
        }
        if let Some(stray) = fields.next() {
            return Err(err(lineno, format!("unexpected trailing field '{stray}'")));
        }
    }

    let ambient = ambient.ok_or_else(|| err(0, "missing 'ambient' line".into()))?;
    let substrate = substrate.ok_or_else(|| err(0, "missing 'substrate' line".into()))?;
    Ok(LayerStack::new(ambient, layers, substrate))
}

fn map_invalid(path: &str, line: usize) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::StackFile {
        path: path.to_string(),
        line,
        message: e.to_string(),
    }
}

pub fn read_stack(path: impl AsRef<Path>) -> Result<LayerStack> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_stack(&text, &path.display().to_string())
}

pub fn format_stack(stack: &LayerStack) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "ambient {}", stack.ambient().index());
    for layer in stack.layers() {
        let _ = writeln!(
            out,
            "layer {} {}",
            layer.medium().index(),
            layer.thickness_nm()
        );
    }
    let _ = writeln!(out, "substrate {}", stack.substrate().index());
    out
}

pub fn write_stack(path: impl AsRef<Path>, stack: &LayerStack) -> Result<()> {
    std::fs::write(path, format_stack(stack))?;
    Ok(())
}
