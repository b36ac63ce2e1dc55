use std::path::Path;

use milnor_core::arrow::{surgery, ArrowPresentation};
use milnor_core::cut2d::{parse_cut_str, CutDiagram};
use milnor_core::gauss::BasedDiagram;
use sha2::{Digest, Sha256};

use crate::CliError;

pub enum Input {
    Diagram(BasedDiagram),
    Cut(CutDiagram),
}

pub struct Loaded {
    pub input: Input,
    pub sha256: String,
}

/// Reads `.gauss`, `.arrows` (through surgery) or `.cutd` files.
pub fn load(path: &Path) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let sha256 = hex::encode(Sha256::digest(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))?;
    let fail = |e: &dyn std::fmt::Display| CliError::Input(format!("{}: {e}", path.display()));
    let input = match path.extension().and_then(|e| e.to_str()) {
        Some("gauss") => Input::Diagram(BasedDiagram::parse(&text).map_err(|e| fail(&e))?),
        Some("arrows") => {
            let p = ArrowPresentation::parse(&text).map_err(|e| fail(&e))?;
            Input::Diagram(surgery(&p).map_err(|e| fail(&e))?)
        }
        Some("cutd") => Input::Cut(parse_cut_str(&text).map_err(|e| fail(&e))?),
        _ => {
            return Err(CliError::Input(format!(
                "{}: unknown input type (expected .gauss, .arrows or .cutd)",
                path.display()
            )))
        }
    };
    Ok(Loaded { input, sha256 })
}

pub fn load_diagram(path: &Path) -> Result<(BasedDiagram, String), CliError> {
    let l = load(path)?;
    match l.input {
        Input::Diagram(d) => Ok((d, l.sha256)),
        Input::Cut(_) => Err(CliError::Input(format!(
            "{}: this command needs a link diagram, not a cut-diagram",
            path.display()
        ))),
    }
}
