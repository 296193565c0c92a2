//! Iteration of a piecewise polynomial map into a difference system.

use serde_json::{json, Value};

use super::{check_fresh, CompiledSystem, Reduction, ReductionError, SourceDescriptor};
use crate::diffpoly::{DiffPoly, DiffSystem, Ring};
use crate::monoid::MonoidKind;
use crate::piecewise::PiecewiseMap;
use crate::poly::Poly;

/// `S_W`: `Z·h_1, …, Z·h_t, Z + Y_1 h_1 + … + Y_t h_t − 1` with `h_k` read in
/// the variables `x_vars`.
pub fn indicator_system(
    kind: MonoidKind,
    arity: usize,
    h: &[Poly],
    x_vars: &[usize],
    fresh_y: &[usize],
    fresh_z: usize,
) -> Result<Vec<DiffPoly>, ReductionError> {
    if h.len() != fresh_y.len() {
        return Err(ReductionError::Invalid(format!(
            "{} polynomials but {} fresh Y variables",
            h.len(),
            fresh_y.len()
        )));
    }
    check_fresh(x_vars.iter().chain(fresh_y).copied().chain([fresh_z]), arity)?;
    if let Some(p) = h.iter().find(|p| p.nvars() > x_vars.len()) {
        return Err(ReductionError::Invalid(format!("{p} uses more than {} variables", x_vars.len())));
    }
    let xs: Vec<DiffPoly> = x_vars.iter().map(|&i| DiffPoly::var(kind, arity, i)).collect();
    let z = DiffPoly::var(kind, arity, fresh_z);
    let lifted: Vec<DiffPoly> = h.iter().map(|p| DiffPoly::from_poly(kind, arity, p, &xs)).collect();
    let mut out: Vec<DiffPoly> = lifted.iter().map(|hk| &z * hk).collect();
    let mut last = &z - &DiffPoly::int(kind, arity, 1);
    for (hk, &y) in lifted.iter().zip(fresh_y) {
        last = &last + &(&DiffPoly::var(kind, arity, y) * hk);
    }
    out.push(last);
    Ok(out)
}

/// Variables attached to one piece `C_j = V(W_j) ∖ V(W′_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceVars {
    pub y: Vec<usize>,
    pub z: usize,
    pub y_prime: Vec<usize>,
    pub z_prime: usize,
    /// Equations of `W_j`.
    pub h: Vec<Poly>,
    /// Equations of `W_j ∩ W′_j`; `None` when `W′_j` is empty.
    pub h_prime: Option<Vec<Poly>>,
}

/// Canonical variable numbering of a compiled dynamics system: `U`, `U′`,
/// the `X` block, all `Y_j`, all `Z_j`, all `Y′_j`, all `Z′_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicsLayout {
    pub kind: MonoidKind,
    pub map: PiecewiseMap,
    pub v: Vec<Poly>,
    pub pieces: Vec<PieceVars>,
    pub arity: usize,
}

pub const U: usize = 0;
pub const U_PRIME: usize = 1;

impl DynamicsLayout {
    pub fn new(map: &PiecewiseMap, v: &[Poly], kind: MonoidKind) -> Result<Self, ReductionError> {
        if !matches!(kind, MonoidKind::Nat | MonoidKind::Int) {
            return Err(ReductionError::Invalid(format!("dynamics compile to nat or int, not {kind}")));
        }
        let n = map.dim();
        if let Some(g) = v.iter().find(|g| g.nvars() > n) {
            return Err(ReductionError::Invalid(format!("V equation {g} uses more than {n} variables")));
        }
        // W′ ⊆ W is needed so that Z − Z′ indicates the piece; use W ∩ W′.
        let hs: Vec<(Vec<Poly>, Option<Vec<Poly>>)> = map
            .pieces()
            .iter()
            .map(|p| {
                let hp = (!p.w_prime.is_empty()).then(|| {
                    let mut all = p.w.clone();
                    for g in &p.w_prime {
                        if !all.contains(g) {
                            all.push(g.clone());
                        }
                    }
                    all
                });
                (p.w.clone(), hp)
            })
            .collect();
        let mut next = 2 + n;
        let mut alloc = |k: usize| {
            let r: Vec<usize> = (next..next + k).collect();
            next += k;
            r
        };
        let ys: Vec<Vec<usize>> = hs.iter().map(|(h, _)| alloc(h.len())).collect();
        let zs: Vec<usize> = hs.iter().map(|_| alloc(1)[0]).collect();
        let yps: Vec<Vec<usize>> = hs
            .iter()
            .map(|(_, hp)| alloc(hp.as_ref().map_or(0, Vec::len)))
            .collect();
        let zps: Vec<usize> = hs.iter().map(|_| alloc(1)[0]).collect();
        let pieces = hs
            .into_iter()
            .enumerate()
            .map(|(j, (h, h_prime))| PieceVars {
                y: ys[j].clone(),
                z: zs[j],
                y_prime: yps[j].clone(),
                z_prime: zps[j],
                h,
                h_prime,
            })
            .collect();
        Ok(DynamicsLayout {
            kind,
            map: map.clone(),
            v: v.to_vec(),
            pieces,
            arity: next,
        })
    }

    /// Rebuilds the layout from the source descriptor of a compiled system.
    pub fn from_compiled(c: &CompiledSystem) -> Result<Self, ReductionError> {
        if c.source.reduction != Reduction::Dynamics {
            return Err(ReductionError::Invalid(format!(
                "system was produced by the {} reduction",
                c.source.reduction
            )));
        }
        let bad = |m: String| ReductionError::Invalid(m);
        let inputs = &c.source.inputs;
        let map = PiecewiseMap::from_json(inputs.get("map").ok_or_else(|| bad("source has no map".into()))?)
            .map_err(|e| bad(e.to_string()))?;
        let v = parse_poly_list(inputs.get("V").ok_or_else(|| bad("source has no V".into()))?)?;
        let layout = DynamicsLayout::new(&map, &v, c.system.kind())?;
        if layout.arity != c.system.arity() {
            return Err(bad(format!(
                "source describes {} variables, system has {}",
                layout.arity,
                c.system.arity()
            )));
        }
        Ok(layout)
    }

    pub fn n(&self) -> usize {
        self.map.dim()
    }

    /// Index of `X_k` for `k` in `0..n`.
    pub fn x(&self, k: usize) -> usize {
        2 + k
    }

    pub fn x_vars(&self) -> Vec<usize> {
        (0..self.n()).map(|k| self.x(k)).collect()
    }

    fn names(&self) -> (Vec<String>, Vec<String>) {
        let mut names = vec![String::new(); self.arity];
        let mut roles = vec![String::new(); self.arity];
        let mut set = |i: usize, name: String, role: String| {
            names[i] = name;
            roles[i] = role;
        };
        set(U, "U".into(), "U".into());
        set(U_PRIME, "U'".into(), "U'".into());
        for k in 0..self.n() {
            set(self.x(k), format!("X{}", k + 1), format!("X{}", k + 1));
        }
        for (j, p) in self.pieces.iter().enumerate() {
            let j = j + 1;
            for (k, &y) in p.y.iter().enumerate() {
                set(y, format!("Y{j}_{}", k + 1), format!("Y_{{{j},{}}}", k + 1));
            }
            set(p.z, format!("Z{j}"), format!("Z_{j}"));
            for (k, &y) in p.y_prime.iter().enumerate() {
                set(y, format!("Y'{j}_{}", k + 1), format!("Y'_{{{j},{}}}", k + 1));
            }
            set(p.z_prime, format!("Z'{j}"), format!("Z'_{j}"));
        }
        (names, roles)
    }
}

fn parse_poly_list(v: &Value) -> Result<Vec<Poly>, ReductionError> {
    v.as_array()
        .ok_or_else(|| ReductionError::Invalid("V must be a list of polynomials".into()))?
        .iter()
        .map(|s| {
            let s = s
                .as_str()
                .ok_or_else(|| ReductionError::Invalid(format!("{s} is not a string")))?;
            Poly::parse(s).map_err(|e| ReductionError::Invalid(format!("\"{s}\": {e}")))
        })
        .collect()
}

/// The system `S` with inequation `σ(U) − U` whose solutions with the
/// inequation nonvanishing encode orbits of `map` that start in `V(v)`
/// and keep the last coordinate nonzero after the start.
pub fn compile_dynamics(map: &PiecewiseMap, v: &[Poly], kind: MonoidKind) -> Result<CompiledSystem, ReductionError> {
    let layout = DynamicsLayout::new(map, v, kind)?;
    let arity = layout.arity;
    let (names, legend) = layout.names();
    let ring = Ring::new(kind, names).map_err(ReductionError::Invalid)?;
    let xs = layout.x_vars();
    let n = xs.len();

    let mut eqs = Vec::new();
    for p in &layout.pieces {
        eqs.extend(indicator_system(kind, arity, &p.h, &xs, &p.y, p.z)?);
    }
    for p in &layout.pieces {
        match &p.h_prime {
            Some(hp) => eqs.extend(indicator_system(kind, arity, hp, &xs, &p.y_prime, p.z_prime)?),
            // the empty closed set: its indicator is identically 0
            None => eqs.push(ring.var(p.z_prime)),
        }
    }

    let xd: Vec<DiffPoly> = xs.iter().map(|&i| ring.var(i)).collect();
    let u = ring.var(U);
    let su = ring.sigma(U);
    let du = &su - &u;
    for (k, &x) in xs.iter().enumerate() {
        let mut image = ring.zero();
        for (piece, p) in map.pieces().iter().zip(&layout.pieces) {
            let q = DiffPoly::from_poly(kind, arity, &piece.q[k], &xd);
            image = &image + &(&q * &(&ring.var(p.z) - &ring.var(p.z_prime)));
        }
        eqs.push(&su * &(&ring.sigma(x) - &image));
    }
    eqs.push(&u * &(&u - &ring.int(1)));
    eqs.push(&du * &(&du - &ring.int(1)));
    eqs.push(&u * &(&(&xd[n - 1] * &ring.var(U_PRIME)) - &ring.int(1)));
    for g in v {
        eqs.push(&du * &DiffPoly::from_poly(kind, arity, g, &xd));
    }

    let system = DiffSystem::new(ring, eqs, Some(du))?;
    let x_names = Poly::default_names(n.max(2));
    let source = SourceDescriptor {
        reduction: Reduction::Dynamics,
        inputs: json!({
            "map": map.to_json(),
            "V": v.iter().map(|g| g.display_with(&x_names)).collect::<Vec<_>>(),
            "monoid": kind,
        }),
    };
    Ok(CompiledSystem::new(system, legend, source))
}
