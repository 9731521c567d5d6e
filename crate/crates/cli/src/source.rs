//! Named states, file loading and error classification.

use std::path::Path;

use clap::ValueEnum;
use gmebound::io::{parse_pair_set, parse_state, LoadedState};
use gmebound::presets::{ghz_pairs, singlet4_pairs, w_pairs};
use gmebound::witness::isotropic_pairs;
use gmebound::{
    make_dicke_state, make_ghz_default, make_max_entangled, make_singlet4, make_w_state, materialize_r_sigma, DickeWitnessSpec,
    Error, PairSet, PureState,
};

/// States that can be named on the command line instead of given as files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Three-qubit W state.
    W,
    /// `(|0…0⟩ + |d-1…d-1⟩)/√2` on `--n` qudits of dimension `--d` (default 3, 2).
    Ghz,
    /// Dicke state with `--m` excitations (default n=4, d=2, m=n/2).
    Dicke,
    /// Four-qubit singlet.
    Singlet4,
    /// Two-qudit maximally entangled state of dimension `--d` (default 3).
    Isotropic,
}

/// Shape parameters that accompany a preset.
#[derive(Clone, Copy, Debug, Default)]
pub struct Shape {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub m: Option<usize>,
}

impl Shape {
    fn fixed(&self, name: &str, n: usize, d: usize) -> gmebound::Result<()> {
        if self.n.is_some_and(|v| v != n) || self.d.is_some_and(|v| v != d) {
            return Err(Error::InvalidInput(format!("preset {name} has n = {n}, d = {d}")));
        }
        Ok(())
    }

    /// `(n, d, m)` for the Dicke preset and witness.
    pub fn dicke(&self) -> (usize, usize, usize) {
        let n = self.n.unwrap_or(4);
        (n, self.d.unwrap_or(2), self.m.unwrap_or(n / 2))
    }
}

impl Preset {
    pub fn state(self, shape: Shape) -> gmebound::Result<PureState> {
        match self {
            Preset::W => shape.fixed("w", 3, 2).map(|_| make_w_state()),
            Preset::Singlet4 => shape.fixed("singlet4", 4, 2).map(|_| make_singlet4()),
            Preset::Ghz => make_ghz_default(shape.n.unwrap_or(3), shape.d.unwrap_or(2)),
            Preset::Dicke => {
                let (n, d, m) = shape.dicke();
                make_dicke_state(n, d, m)
            }
            Preset::Isotropic => {
                shape.fixed("isotropic", 2, shape.d.unwrap_or(3))?;
                make_max_entangled(shape.d.unwrap_or(3))
            }
        }
    }

    /// The pair selection that goes with the preset.
    pub fn pairs(self, shape: Shape) -> gmebound::Result<PairSet> {
        match self {
            Preset::W => shape.fixed("w", 3, 2).map(|_| w_pairs()),
            Preset::Singlet4 => shape.fixed("singlet4", 4, 2).map(|_| singlet4_pairs()),
            Preset::Ghz => ghz_pairs(shape.n.unwrap_or(3), shape.d.unwrap_or(2)),
            Preset::Dicke => {
                let (n, d, m) = shape.dicke();
                materialize_r_sigma(&DickeWitnessSpec::new(n, d, m)?)
            }
            Preset::Isotropic => isotropic_pairs(shape.d.unwrap_or(3)),
        }
    }
}

/// Raised for unreadable files and invalid flag combinations.
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

pub fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))
}

pub fn load_state(path: &Path) -> anyhow::Result<LoadedState> {
    Ok(parse_state(&read(path)?)?)
}

pub fn load_pairs(path: &Path, d: usize) -> anyhow::Result<PairSet> {
    Ok(parse_pair_set(&read(path)?, d)?)
}

/// 2 for bad input, 1 for analysis failures.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return if e.is_input_error() { 2 } else { 1 };
        }
        if cause.is::<InputError>() {
            return 2;
        }
    }
    1
}

/// Parses `lo:hi:count` or a comma separated list of visibilities.
pub fn parse_p_grid(s: &str) -> anyhow::Result<Vec<f64>> {
    let bad = |why: &str| input_error(format!("--p-grid {s:?}: {why}"));
    let grid: Vec<f64> = if let [lo, hi, count] = s.split(':').collect::<Vec<_>>()[..] {
        let lo: f64 = lo.trim().parse().map_err(|_| bad("bad lower end"))?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad("bad upper end"))?;
        let count: usize = count.trim().parse().map_err(|_| bad("bad point count"))?;
        match count {
            0 => return Err(bad("needs at least one point")),
            1 => vec![lo],
            _ => (0..count).map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64).collect(),
        }
    } else {
        s.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad("bad number"))).collect::<anyhow::Result<_>>()?
    };
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(bad("visibilities must lie in [0, 1]"));
    }
    Ok(grid)
}
