//! Square tiling problems and their encoding as formulas over a grid of
//! initial segments.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{eval_term, Env};
use crate::language::{term_is_predicate_free, Formula, Mode, Term};
use crate::structure::Structure;
use crate::value::{seg_from_end, Value};

/// Tiles are `1..=tiles`. `(a, b)` in `v` allows `b` directly below `a`;
/// `(a, b)` in `h` allows `b` directly right of `a`. `init` fixes the
/// first cells of the top row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominoSystem {
    pub tiles: usize,
    #[serde(rename = "H")]
    pub h: BTreeSet<(usize, usize)>,
    #[serde(rename = "V")]
    pub v: BTreeSet<(usize, usize)>,
    #[serde(default)]
    pub init: Vec<usize>,
}

impl DominoSystem {
    pub fn validate(&self) -> Result<()> {
        if self.tiles == 0 {
            return Err(Error::Precondition("a domino system needs at least one tile".into()));
        }
        let ok = |t: usize| (1..=self.tiles).contains(&t);
        for &(a, b) in self.h.iter().chain(&self.v) {
            if !ok(a) || !ok(b) {
                return Err(Error::Precondition(format!(
                    "pair ({a}, {b}) names a tile outside 1..={}",
                    self.tiles
                )));
            }
        }
        if let Some(t) = self.init.iter().find(|&&t| !ok(t)) {
            return Err(Error::Precondition(format!(
                "initial tile {t} outside 1..={}",
                self.tiles
            )));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<DominoSystem> {
        let d: DominoSystem = serde_json::from_str(text).map_err(|e| Error::Precondition(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domino system serializes")
    }
}

pub fn tile_predicate(i: usize) -> String {
    format!("T{i}")
}

fn tile(i: usize, row: Term, col: Term) -> Formula {
    Formula::pred(&tile_predicate(i), vec![row, col])
}

fn tails(t: Term, times: usize) -> Term {
    (0..times).fold(t, |t, _| Term::tail(t))
}

/// The grid side denoted by a ground, predicate-free side term.
pub fn side_value(d: &DominoSystem, side: &Term) -> Result<Value> {
    if !side.is_ground() || !term_is_predicate_free(side) {
        return Err(Error::Precondition(format!(
            "side term must be ground and predicate-free: {side}"
        )));
    }
    let eps = eval_term(side, &Env::new(), &Structure::empty())?;
    let len = eps.expect_list("side term")?.len();
    if len < d.init.len().max(1) {
        return Err(Error::Precondition(format!(
            "side term has {len} elements, fewer than max(|init|, 1) = {}",
            d.init.len().max(1)
        )));
    }
    Ok(eps)
}

/// The axioms whose models are the tilings of the grid indexed by the
/// segments of the side term.
pub fn domino_theory(d: &DominoSystem, side: &Term) -> Result<Vec<Formula>> {
    d.validate()?;
    side_value(d, side)?;
    let p = d.tiles;
    let eps = || side.clone();
    let all = |var: &str, body: Formula| Formula::forall(var, Mode::Seg, eps(), body);
    let x = || Term::var("x");
    let y = || Term::var("y");
    let mut out = Vec::new();

    // every cell carries a tile
    out.push(all(
        "x",
        all("y", Formula::disjunction((1..=p).map(|i| tile(i, y(), x())))),
    ));

    // at most one tile per cell
    for i in 1..=p {
        for j in 1..=p {
            if i != j {
                out.push(all(
                    "x",
                    all("y", Formula::not(Formula::and(tile(i, y(), x()), tile(j, y(), x())))),
                ));
            }
        }
    }

    // the top row starts with the initial tiles
    if !d.init.is_empty() {
        out.push(Formula::conjunction(
            d.init.iter().enumerate().map(|(c, &t)| tile(t, eps(), tails(eps(), c))),
        ));
    }

    // vertical neighbours: row y1 is directly below row y2
    for i in 1..=p {
        for j in 1..=p {
            if !d.v.contains(&(j, i)) {
                let (y1, y2) = (Term::var("y1"), Term::var("y2"));
                let body = Formula::conjunction([
                    Formula::Eq(y1.clone(), Term::tail(y2.clone())),
                    tile(i, y1, x()),
                    tile(j, y2, x()),
                ]);
                out.push(all("x", all("y1", all("y2", Formula::not(body)))));
            }
        }
    }

    // horizontal neighbours: column x1 is directly right of column x2
    for i in 1..=p {
        for j in 1..=p {
            if !d.h.contains(&(j, i)) {
                let (x1, x2) = (Term::var("x1"), Term::var("x2"));
                let body = Formula::conjunction([
                    Formula::Eq(x1.clone(), Term::tail(x2.clone())),
                    tile(i, y(), x1),
                    tile(j, y(), x2),
                ]);
                out.push(all("x1", all("x2", all("y", Formula::not(body)))));
            }
        }
    }
    Ok(out)
}

/// `tiling[r][c]` is the tile in row `r + 1`, column `c + 1`.
pub type Tiling = Vec<Vec<usize>>;

/// Whether `t` is an `m x m` tiling respecting every constraint of `d`.
pub fn is_tiling(d: &DominoSystem, t: &Tiling) -> bool {
    let m = t.len();
    if t.iter().any(|row| row.len() != m) || d.init.len() > m {
        return false;
    }
    for r in 0..m {
        for c in 0..m {
            let k = t[r][c];
            if !(1..=d.tiles).contains(&k) {
                return false;
            }
            if r > 0 && !d.v.contains(&(t[r - 1][c], k)) {
                return false;
            }
            if c > 0 && !d.h.contains(&(t[r][c - 1], k)) {
                return false;
            }
        }
    }
    d.init.iter().enumerate().all(|(c, &k)| t[0][c] == k)
}

/// The structure interpreting each tile predicate on the segment grid of
/// `eps` according to `t`.
pub fn tiling_model(d: &DominoSystem, eps: &Value, t: &Tiling) -> Result<Structure> {
    let mut urs = BTreeSet::new();
    eps.urelements(&mut urs);
    let mut s = Structure::new(urs);
    for i in 1..=d.tiles {
        s.declare_predicate(&tile_predicate(i), 2)?;
    }
    for (r, row) in t.iter().enumerate() {
        for (c, &k) in row.iter().enumerate() {
            s.insert(
                &tile_predicate(k),
                vec![seg_from_end(eps, r + 1)?, seg_from_end(eps, c + 1)?],
            )?;
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy)]
pub struct TilingGuard {
    pub max_side: usize,
    pub max_tiles: usize,
}

impl Default for TilingGuard {
    fn default() -> Self {
        TilingGuard {
            max_side: 6,
            max_tiles: 4,
        }
    }
}

pub fn oracle_tiling(d: &DominoSystem, m: usize) -> Result<Option<Tiling>> {
    oracle_tiling_with(d, m, TilingGuard::default())
}

/// Exhaustive backtracking search in row-major order.
pub fn oracle_tiling_with(d: &DominoSystem, m: usize, guard: TilingGuard) -> Result<Option<Tiling>> {
    d.validate()?;
    if m > guard.max_side || d.tiles > guard.max_tiles {
        return Err(Error::Guard(format!(
            "tiling search limited to side <= {} and <= {} tiles",
            guard.max_side, guard.max_tiles
        )));
    }
    if d.init.len() > m {
        return Err(Error::Precondition(format!(
            "{} initial tiles do not fit a row of {m}",
            d.init.len()
        )));
    }
    if m == 0 {
        return Ok(Some(Vec::new()));
    }
    let mut grid = vec![vec![0; m]; m];
    Ok(place(d, &mut grid, 0).then_some(grid))
}

fn place(d: &DominoSystem, grid: &mut Tiling, cell: usize) -> bool {
    let m = grid.len();
    if cell == m * m {
        return true;
    }
    let (r, c) = (cell / m, cell % m);
    let choices: Vec<usize> = if r == 0 && c < d.init.len() {
        vec![d.init[c]]
    } else {
        (1..=d.tiles).collect()
    };
    for k in choices {
        if r > 0 && !d.v.contains(&(grid[r - 1][c], k)) {
            continue;
        }
        if c > 0 && !d.h.contains(&(grid[r][c - 1], k)) {
            continue;
        }
        grid[r][c] = k;
        if place(d, grid, cell + 1) {
            return true;
        }
    }
    grid[r][c] = 0;
    false
}
