//! String combinatorics on canonical quivers of type A∞ / A∞∞: the ordered
//! path systems `Q_R`, `Q_L`, the source translation σ, double hooks, τ on
//! strings and orbit tags; plus the D∞ indecomposability test.
//!
//! Vertices are integer labels. Edge `x` joins `x` and `x + 1` and is either
//! right-pointing (`x → x+1`) or left-pointing (`x ← x+1`).

use crate::ar::{ar_translate, Direction};
use crate::error::{Error, Result};
use crate::hom::is_indecomposable;
use crate::quiver::{Dir, InfType, Quiver, QuiverClass};
use crate::rep::{recognize, DimVector, End, Rep, StringSpec, WindowRep};
use serde_json::{json, Value};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathSide {
    R,
    L,
}

impl fmt::Display for PathSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathSide::R => "R",
            PathSide::L => "L",
        })
    }
}

/// The line view of a canonical type-A quiver.
pub struct Line<'a> {
    q: &'a Quiver,
    lo: Option<i64>,
    hi: Option<i64>,
    /// Beyond these labels the orientation is periodic.
    left_settled: i64,
    right_settled: i64,
    period: i64,
    /// Constant orientation of the far ends (`Some(true)` = right-pointing).
    left_const: Option<bool>,
    right_const: Option<bool>,
}

impl<'a> Line<'a> {
    pub fn new(q: &'a Quiver) -> Result<Line<'a>> {
        let class = q.classify()?;
        if !matches!(class, QuiverClass::InfDynkin(InfType::AInf | InfType::ABiinf)) {
            return Err(Error::WrongType("needs a quiver of type A_inf or A_inf^inf".into()));
        }
        let lm = q.labels().ok_or_else(|| Error::WrongType("no line labels".into()))?;
        let (mut left_settled, mut right_settled) = (i64::MIN / 4, i64::MAX / 4);
        let (mut left_const, mut right_const) = (None, None);
        let mut period = 1;
        let core_lo = lm.core.iter().copied().min().unwrap_or(0);
        let core_hi = lm.core.iter().copied().max().unwrap_or(0);
        left_settled = left_settled.max(core_lo);
        right_settled = right_settled.min(core_hi);
        for (t, tl) in q.tails().iter().enumerate() {
            let w = &tl.word;
            period = period.max(w.period_len() as i64);
            let pre = w.prefix_len() as i64;
            let cst = w.constant_from().map(|(d, _)| d);
            if lm.tail_sign[t] > 0 {
                right_settled = lm.tail_base[t] + pre;
                right_const = cst.map(|d| d == Dir::Out);
            } else {
                left_settled = lm.tail_base[t] - pre;
                left_const = cst.map(|d| d == Dir::In);
            }
        }
        Ok(Line { q, lo: lm.lo, hi: lm.hi, left_settled, right_settled, period, left_const, right_const })
    }

    pub fn quiver(&self) -> &Quiver {
        self.q
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo.is_none_or(|l| x >= l) && self.hi.is_none_or(|h| x <= h)
    }

    /// Whether edge `x` exists and points right (`x → x+1`).
    pub fn right(&self, x: i64) -> bool {
        let (Some(a), Some(b)) = (self.q.vertex_at(x), self.q.vertex_at(x + 1)) else { return false };
        self.q.out_arrows(a).iter().any(|&ar| self.q.target(ar) == b)
    }

    /// Whether edge `x` exists and points left (`x ← x+1`).
    pub fn left(&self, x: i64) -> bool {
        self.contains(x) && self.contains(x + 1) && !self.right(x)
    }

    fn far_right(&self, x: i64) -> bool {
        x > self.right_settled + self.period
    }

    fn far_left(&self, x: i64) -> bool {
        x < self.left_settled - self.period
    }

    /// End of the maximal right-pointing run starting at `x`.
    pub fn run_right(&self, x: i64) -> End {
        let mut y = x;
        loop {
            if self.far_right(y) && self.right_const == Some(true) {
                return End::Infinite;
            }
            if !self.right(y) {
                return End::At(y);
            }
            y += 1;
        }
    }

    /// End of the maximal left-pointing run starting at `x` (`x → x−1 → ⋯`).
    pub fn run_left(&self, x: i64) -> End {
        let mut y = x;
        loop {
            if self.far_left(y) && self.left_const == Some(false) {
                return End::Infinite;
            }
            if !self.left(y - 1) {
                return End::At(y);
            }
            y -= 1;
        }
    }

    /// Start of the maximal right-pointing run ending at `y` (`⋯ → y`).
    fn run_into_from_left(&self, y: i64) -> End {
        let mut z = y;
        loop {
            if self.far_left(z) && self.left_const == Some(true) {
                return End::Infinite;
            }
            if !self.right(z - 1) {
                return End::At(z);
            }
            z -= 1;
        }
    }

    /// Start of the maximal left-pointing run ending at `y` (`y ← ⋯`).
    fn run_into_from_right(&self, y: i64) -> End {
        let mut z = y;
        loop {
            if self.far_right(z) && self.right_const == Some(false) {
                return End::Infinite;
            }
            if !self.left(z) {
                return End::At(z);
            }
            z += 1;
        }
    }

    pub fn is_start(&self, side: PathSide, x: i64) -> bool {
        if !self.contains(x) {
            return false;
        }
        match side {
            PathSide::R => self.lo == Some(x) || self.left(x - 1),
            PathSide::L => self.right(x),
        }
    }

    pub fn member_at(&self, side: PathSide, start: i64) -> Option<Member> {
        if !self.is_start(side, start) {
            return None;
        }
        let end = match side {
            PathSide::R => self.run_right(start),
            PathSide::L => self.run_left(start),
        };
        Some(Member { side, start, end })
    }

    /// Nearest start strictly below `s`.
    pub fn pred_start(&self, side: PathSide, s: i64) -> Option<i64> {
        let mut y = s - 1;
        loop {
            if self.is_start(side, y) {
                return Some(y);
            }
            if !self.contains(y) || y < s.min(self.left_settled) - self.period {
                return None;
            }
            y -= 1;
        }
    }

    /// Nearest start strictly above `s`.
    pub fn succ_start(&self, side: PathSide, s: i64) -> Option<i64> {
        let mut y = s + 1;
        loop {
            if self.is_start(side, y) {
                return Some(y);
            }
            if !self.contains(y) || y > s.max(self.right_settled) + self.period {
                return None;
            }
            y += 1;
        }
    }

    /// Number of infinite maximal paths that have a starting vertex.
    pub fn infinite_with_start(&self) -> usize {
        let mut n = 0;
        if self.right_const == Some(true) {
            // Right-pointing far end: the run containing it starts somewhere
            // unless the whole line points right.
            let s = self.run_into_from_left(self.right_settled + self.period + 1);
            if s != End::Infinite {
                n += 1;
            }
        }
        if self.left_const == Some(false) {
            let s = self.run_into_from_right(self.left_settled - self.period - 1);
            if s != End::Infinite {
                n += 1;
            }
        }
        n
    }

    /// Whether the walk of a string is a directed path; returns it as a member-shaped
    /// path (start, end, side) when it is.
    pub fn as_path(&self, s: &StringSpec) -> Option<Member> {
        match (s.lo, s.hi) {
            (End::At(a), End::At(b)) if a == b => Some(Member { side: PathSide::R, start: a, end: End::At(a) }),
            (End::At(a), End::At(b)) => {
                if (a..b).all(|x| self.right(x)) {
                    Some(Member { side: PathSide::R, start: a, end: End::At(b) })
                } else if (a..b).all(|x| self.left(x)) {
                    Some(Member { side: PathSide::L, start: b, end: End::At(a) })
                } else {
                    None
                }
            }
            (End::At(a), End::Infinite) => (self.run_right(a) == End::Infinite).then_some(Member {
                side: PathSide::R,
                start: a,
                end: End::Infinite,
            }),
            (End::Infinite, End::At(b)) => (self.run_left(b) == End::Infinite).then_some(Member {
                side: PathSide::L,
                start: b,
                end: End::Infinite,
            }),
            _ => None,
        }
    }

    /// The member of `Q_R` or `Q_L` whose path is the walk of `s`.
    pub fn member_of(&self, s: &StringSpec) -> Option<Member> {
        let p = self.as_path(s)?;
        if p.end == End::At(p.start) {
            // Trivial paths may sit in either system.
            return [PathSide::R, PathSide::L]
                .into_iter()
                .find_map(|side| self.member_at(side, p.start).filter(|m| m.end == End::At(p.start)));
        }
        self.member_at(p.side, p.start).filter(|m| m.end == p.end)
    }

    pub fn name(&self, m: &Member) -> String {
        match m.end {
            End::At(e) if e == m.start => format!("ε_{}", brace(m.start)),
            End::At(e) => format!("p_{{{},{}}}", m.start, e),
            End::Infinite if self.infinite_with_start() == 1 => "p_∞".into(),
            End::Infinite => format!("p_{{{},∞}}", m.start),
        }
    }
}

fn brace(x: i64) -> String {
    let s = x.to_string();
    if s.chars().count() == 1 {
        s
    } else {
        format!("{{{s}}}")
    }
}

/// A maximal path of `Q_R` (right-pointing, from `start` up to `end`) or of
/// `Q_L` (left-pointing, from `start` down to `end`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Member {
    pub side: PathSide,
    pub start: i64,
    pub end: End,
}

impl Member {
    pub fn is_infinite(&self) -> bool {
        self.end == End::Infinite
    }

    pub fn string(&self) -> StringSpec {
        match (self.side, self.end) {
            (_, End::At(e)) => StringSpec::interval(self.start, e),
            (PathSide::R, End::Infinite) => StringSpec::ray_up(self.start),
            (PathSide::L, End::Infinite) => StringSpec::ray_down(self.start),
        }
    }

    pub fn rep(&self) -> Rep {
        Rep::String(self.string())
    }
}

/// The members of one system with starts in a label range, ordered by start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRQLSet {
    pub side: PathSide,
    pub members: Vec<Member>,
    /// More members exist below / above the range.
    pub more_below: bool,
    pub more_above: bool,
}

impl QRQLSet {
    /// Paper-style chain: `Q_R` ascending joined by `⇠`, `Q_L` descending joined by `⇢`
    /// (arrows point along σ).
    pub fn render(&self, line: &Line) -> String {
        let names: Vec<String> = self.members.iter().map(|m| line.name(m)).collect();
        match self.side {
            PathSide::R => {
                let mut s = names.join(" ⇠ ");
                if self.more_below {
                    s = format!("⋯ ⇠ {s}");
                }
                if self.more_above {
                    s.push_str(" ⇠ ⋯");
                }
                s
            }
            PathSide::L => {
                let rev: Vec<String> = names.into_iter().rev().collect();
                let mut s = rev.join(" ⇢ ");
                if self.more_above {
                    s = format!("⋯ ⇢ {s}");
                }
                if self.more_below {
                    s.push_str(" ⇢ ⋯");
                }
                s
            }
        }
    }

    pub fn to_json(&self, line: &Line) -> Value {
        json!({
            "side": self.side.to_string(),
            "members": self.members.iter().map(|m| json!({
                "name": line.name(m),
                "start": m.start,
                "end": match m.end { End::At(e) => json!(e), End::Infinite => json!("inf") },
                "string": m.string().to_string(),
            })).collect::<Vec<_>>(),
            "more_below": self.more_below,
            "more_above": self.more_above,
            "chain": self.render(line),
        })
    }
}

/// `Q_R` and `Q_L` restricted to members starting in `[lo, hi]`.
pub fn qr_ql_sets(q: &Quiver, lo: i64, hi: i64) -> Result<(QRQLSet, QRQLSet)> {
    let line = Line::new(q)?;
    let set = |side| {
        let members: Vec<Member> = (lo..=hi).filter_map(|x| line.member_at(side, x)).collect();
        let more_below = line.pred_start(side, lo).is_some();
        let more_above = line.succ_start(side, hi).is_some();
        QRQLSet { side, members, more_below, more_above }
    };
    Ok((set(PathSide::R), set(PathSide::L)))
}

/// A double hook `(q, α, p)` for an arrow `α: x → y`: `q` is the longest path
/// ending in `y` not ending with `α`, `p` the longest path starting in `x` not
/// starting with `α`. Paths are `(start, end)` in traversal order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DoubleHook {
    pub q: (End, i64),
    pub alpha: (i64, i64),
    pub p: (i64, End),
}

impl DoubleHook {
    /// `x < y`: the arrow runs upwards in label order.
    fn upward(&self) -> bool {
        self.alpha.0 < self.alpha.1
    }

    /// Interval from `a` to `b`, where an infinite `b` extends upwards iff `up`.
    fn seg(a: i64, b: End, up: bool) -> StringSpec {
        match b {
            End::At(b) => StringSpec::interval(a, b),
            End::Infinite if up => StringSpec::ray_up(a),
            End::Infinite => StringSpec::ray_down(a),
        }
    }

    /// The string `M(p α⁻¹ q)`.
    pub fn middle(&self) -> StringSpec {
        let (q, p) = (self.q_string(), self.p_string());
        if self.upward() {
            StringSpec { lo: p.lo, hi: q.hi }
        } else {
            StringSpec { lo: q.lo, hi: p.hi }
        }
    }

    /// `q` lies on the far side of `y` from `x`.
    pub fn q_string(&self) -> StringSpec {
        Self::seg(self.q.1, self.q.0, self.upward())
    }

    /// `p` lies on the far side of `x` from `y`.
    pub fn p_string(&self) -> StringSpec {
        Self::seg(self.p.0, self.p.1, !self.upward())
    }

    pub fn q_is_finite(&self) -> bool {
        self.q.0 != End::Infinite
    }
}

/// The double hook of the arrow between labels `a` and `a + 1`.
pub fn double_hook(q: &Quiver, a: i64) -> Result<DoubleHook> {
    let line = Line::new(q)?;
    double_hook_on(&line, a)
}

fn double_hook_on(line: &Line, a: i64) -> Result<DoubleHook> {
    if line.right(a) {
        // α: a → a+1; q comes down from the right into a+1, p runs left from a.
        let (x, y) = (a, a + 1);
        Ok(DoubleHook { q: (line.run_into_from_right(y), y), alpha: (x, y), p: (x, line.run_left(x)) })
    } else if line.left(a) {
        let (x, y) = (a + 1, a);
        Ok(DoubleHook { q: (line.run_into_from_left(y), y), alpha: (x, y), p: (x, line.run_right(x)) })
    } else {
        Err(Error::UnknownVertex(format!("no arrow between {a} and {}", a + 1)))
    }
}

/// σ (`inverse = false`) or σ⁻ on a member, with the double hook witnessing the link.
pub fn source_translate(
    q: &Quiver,
    m: &Member,
    inverse: bool,
) -> Result<std::result::Result<(Member, DoubleHook), &'static str>> {
    let line = Line::new(q)?;
    if line.member_at(m.side, m.start) != Some(*m) {
        return Err(Error::NotMember);
    }
    let target = if inverse { line.succ_start(m.side, m.start) } else { line.pred_start(m.side, m.start) };
    let Some(s) = target else {
        return Ok(Err(match (m.side, inverse) {
            (_, _) if m.is_infinite() => "infinite path",
            (PathSide::R, false) => "no member below",
            (PathSide::L, false) => "path ends at the end of the quiver",
            (_, true) => "no member above",
        }));
    };
    let image = line.member_at(m.side, s).expect("start of a member");
    // The arrow joining the lower member's far end and the upper member.
    let (low, high) = if inverse { (*m, image) } else { (image, *m) };
    let a = match m.side {
        PathSide::R => high.start - 1,
        PathSide::L => match low.end {
            End::At(_) => high.end.clone_at().unwrap_or(high.start) - 1,
            End::Infinite => low.start,
        },
    };
    let hook = double_hook_on(&line, a)?;
    Ok(Ok((image, hook)))
}

trait AtValue {
    fn clone_at(&self) -> Option<i64>;
}

impl AtValue for End {
    fn clone_at(&self) -> Option<i64> {
        match self {
            End::At(x) => Some(*x),
            End::Infinite => None,
        }
    }
}

/// Why a translate of a string is not a representation in `rep⁺`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Undefined {
    Projective,
    Injective,
    PseudoProjective,
    InfiniteDimensional,
}

impl Undefined {
    pub fn name(self) -> &'static str {
        match self {
            Undefined::Projective => "Projective",
            Undefined::Injective => "Injective",
            Undefined::PseudoProjective => "PseudoProjective",
            Undefined::InfiniteDimensional => "InfiniteDimensional",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tau {
    Tau,
    TauInv,
}

/// τ on members of `Q_R` / `Q_L` through σ:
/// `τ M(p) = M(σ_R p)` on `Q_R` and `τ M(p) = M(σ_L⁻ p)` on `Q_L`.
pub fn tau_member(line: &Line, m: &Member, dir: Tau) -> std::result::Result<Member, Undefined> {
    let next = match (m.side, dir) {
        (PathSide::R, Tau::Tau) | (PathSide::L, Tau::TauInv) => line.pred_start(m.side, m.start),
        (PathSide::R, Tau::TauInv) | (PathSide::L, Tau::Tau) => line.succ_start(m.side, m.start),
    };
    match next {
        Some(s) => Ok(line.member_at(m.side, s).expect("start of a member")),
        None => Err(match (m.side, dir) {
            (_, Tau::TauInv) if m.is_infinite() => Undefined::InfiniteDimensional,
            (PathSide::R, Tau::Tau) if line.lo == Some(m.start) => Undefined::Projective,
            (_, Tau::Tau) => Undefined::PseudoProjective,
            (_, Tau::TauInv) => Undefined::Injective,
        }),
    }
}

/// τ / τ⁻ of a string representation. Members of `Q_R ∪ Q_L` go through σ;
/// other strings through the translate engine.
pub fn tau_string(q: &Quiver, s: &StringSpec, dir: Tau) -> Result<std::result::Result<Rep, Undefined>> {
    crate::rep::string_support(q, s)?;
    let line = Line::new(q)?;
    if let Some(m) = line.member_of(s) {
        return Ok(tau_member(&line, &m, dir).map(|n| n.rep()));
    }
    engine_tau(q, &Rep::String(*s), dir)
}

/// τ through the translate engine, with the outcome named when possible.
pub fn engine_tau(q: &Quiver, m: &Rep, dir: Tau) -> Result<std::result::Result<Rep, Undefined>> {
    let w = m.realize(q)?;
    if dir == Tau::TauInv && !w.is_finite_dim() {
        return Ok(Err(Undefined::InfiniteDimensional));
    }
    let r = ar_translate(q, m, if dir == Tau::Tau { Direction::DTr } else { Direction::TrD })?;
    Ok(match r.value {
        None => Err(if dir == Tau::Tau { Undefined::Projective } else { Undefined::Injective }),
        Some(v) if dir == Tau::Tau && !v.is_finite_dim() => Err(Undefined::PseudoProjective),
        Some(v) => Ok(recognize(q, &v.dim_vector()).unwrap_or(Rep::Window(v))),
    })
}

/// Orbit tags for string representations on type-A quivers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitTag {
    Preprojective,
    Preinjective,
    OrbitR,
    OrbitL,
    /// Regular, quasi-length ≥ 2; `lower_bound` when the search was cut off.
    RegularNonQuasiSimple {
        quasi_length: usize,
        lower_bound: bool,
    },
    TrivialRegular,
}

impl OrbitTag {
    pub fn name(&self) -> String {
        match self {
            OrbitTag::Preprojective => "Preprojective".into(),
            OrbitTag::Preinjective => "Preinjective".into(),
            OrbitTag::OrbitR => "OrbitR".into(),
            OrbitTag::OrbitL => "OrbitL".into(),
            OrbitTag::RegularNonQuasiSimple { quasi_length, lower_bound } => {
                format!("RegularNonQuasiSimple({}{})", if *lower_bound { "≥" } else { "" }, quasi_length)
            }
            OrbitTag::TrivialRegular => "TrivialRegular".into(),
        }
    }
}

/// Follows τ (or τ⁻) along a system until it stops or leaves the settled range.
fn chain_end(line: &Line, m: &Member, dir: Tau) -> Option<Undefined> {
    let mut cur = *m;
    for _ in 0..4096 {
        match tau_member(line, &cur, dir) {
            Ok(n) => {
                if line.far_left(n.start) || line.far_right(n.start) {
                    return None;
                }
                cur = n;
            }
            Err(u) => return Some(u),
        }
    }
    None
}

pub fn orbit_classify(q: &Quiver, s: &StringSpec) -> Result<OrbitTag> {
    crate::rep::string_support(q, s)?;
    let line = Line::new(q)?;
    let radius = 64;
    if let Some(m) = line.member_of(s) {
        let back = chain_end(&line, &m, Tau::Tau);
        let fwd = chain_end(&line, &m, Tau::TauInv);
        if back == Some(Undefined::Projective) {
            return Ok(OrbitTag::Preprojective);
        }
        if fwd == Some(Undefined::Injective) {
            return Ok(OrbitTag::Preinjective);
        }
        let own_back = tau_member(&line, &m, Tau::Tau).err();
        let own_fwd = tau_member(&line, &m, Tau::TauInv).err();
        if m.is_infinite() && own_back.is_some() && own_fwd.is_some() {
            return Ok(OrbitTag::TrivialRegular);
        }
        return Ok(match m.side {
            PathSide::R => OrbitTag::OrbitR,
            PathSide::L => OrbitTag::OrbitL,
        });
    }
    // Regular of higher quasi-length: a union of consecutive members of one system.
    for side in [PathSide::R, PathSide::L] {
        if let Some(l) = consecutive_union(&line, side, s) {
            if l >= 2 {
                // The union lies in a regular component only if the system's orbit does.
                let first = line.member_at(side, first_start(&line, side, s)?).unwrap();
                let back = chain_end(&line, &first, Tau::Tau);
                let fwd = chain_end(&line, &first, Tau::TauInv);
                if back != Some(Undefined::Projective) && fwd != Some(Undefined::Injective) {
                    return Ok(OrbitTag::RegularNonQuasiSimple { quasi_length: l, lower_bound: false });
                }
            }
        }
    }
    // Otherwise iterate τ and τ⁻ through the engine.
    let mut cur = Rep::String(*s);
    for _ in 0..radius {
        match engine_tau(q, &cur, Tau::Tau)? {
            Ok(n) => cur = n,
            Err(Undefined::Projective) => return Ok(OrbitTag::Preprojective),
            Err(_) => break,
        }
    }
    let mut cur = Rep::String(*s);
    for _ in 0..radius {
        match engine_tau(q, &cur, Tau::TauInv)? {
            Ok(n) => cur = n,
            Err(Undefined::Injective) => return Ok(OrbitTag::Preinjective),
            Err(_) => break,
        }
    }
    Ok(OrbitTag::RegularNonQuasiSimple { quasi_length: 2, lower_bound: true })
}

fn first_start(line: &Line, side: PathSide, s: &StringSpec) -> Result<i64> {
    let lo = match s.lo {
        End::At(a) => a,
        End::Infinite => return Err(Error::NotMember),
    };
    let hi = match s.hi {
        End::At(b) => b,
        End::Infinite => i64::MAX,
    };
    match side {
        PathSide::R => Ok(lo),
        PathSide::L => {
            // The member covering `lo` starts at the first L-start ≥ lo.
            let mut x = lo;
            while x <= hi && !line.is_start(side, x) {
                x += 1;
            }
            Ok(x)
        }
    }
}

/// Number of consecutive members of one system whose union is exactly the
/// support of `s` (finite strings only).
fn consecutive_union(line: &Line, side: PathSide, s: &StringSpec) -> Option<usize> {
    let (End::At(a), End::At(b)) = (s.lo, s.hi) else { return None };
    let mut covered = a - 1;
    let mut count = 0;
    let mut start = match side {
        PathSide::R => {
            if !line.is_start(side, a) {
                return None;
            }
            a
        }
        PathSide::L => (a..=b).find(|&x| line.is_start(side, x))?,
    };
    loop {
        let m = line.member_at(side, start)?;
        let (mlo, mhi) = match (side, m.end) {
            (PathSide::R, End::At(e)) => (m.start, e),
            (PathSide::L, End::At(e)) => (e, m.start),
            _ => return None,
        };
        if mlo != covered + 1 {
            return None;
        }
        covered = mhi;
        count += 1;
        if covered == b {
            return Some(count);
        }
        if covered > b {
            return None;
        }
        start = line.succ_start(side, start)?;
    }
}

/// Name of a string: `S(x)`, `M(p_{s,e})` for directed paths, `M[a,b]` otherwise.
pub fn string_name(q: &Quiver, s: &StringSpec) -> String {
    if let (End::At(a), End::At(b)) = (s.lo, s.hi) {
        if a == b {
            return q.vertex_at(a).map_or_else(|| format!("S({a})"), |v| format!("S({})", q.vertex_name(v)));
        }
    }
    if let Ok(line) = Line::new(q) {
        if let Some(p) = line.as_path(s) {
            return format!("M({})", line.name(&p));
        }
    }
    format!("M{s}")
}

/// Recognises a thin dimension vector with interval support as a string.
pub fn string_of_dims(q: &Quiver, dv: &DimVector) -> Option<StringSpec> {
    if dv.max_entry() > 1 || dv.is_zero() {
        return None;
    }
    let lm = q.labels()?;
    let mut labels: Vec<i64> = dv.values.keys().map(|&v| q.label_of(v)).collect::<Option<_>>()?;
    labels.sort();
    let dinf = q.classify().ok()? == QuiverClass::InfDynkin(InfType::DInf);
    let mut lo = End::At(*labels.first()?);
    let mut hi = End::At(*labels.last()?);
    if dinf {
        let leaves: Vec<i64> = labels.iter().copied().filter(|&l| l < 2).collect();
        if leaves.len() == 2 {
            return None;
        }
        let spine: Vec<i64> = labels.iter().copied().filter(|&l| l >= 2).collect();
        if let Some(&first) = spine.first() {
            if !leaves.is_empty() && first != 2 {
                return None;
            }
            if spine.windows(2).any(|w| w[1] != w[0] + 1) {
                return None;
            }
        }
    } else if labels.windows(2).any(|w| w[1] != w[0] + 1) {
        return None;
    }
    for (t, &st) in dv.stable.iter().enumerate() {
        if st == 0 {
            continue;
        }
        if lm.tail_sign[t] > 0 {
            hi = End::Infinite;
        } else {
            lo = End::Infinite;
        }
    }
    let spec = StringSpec { lo, hi };
    crate::rep::string_support(q, &spec).ok()?;
    // The recorded window must agree with the string's support.
    let m = Rep::String(spec).materialize(q, &dv.window).ok()?;
    same_dims(&m.dim_vector(), dv).then_some(spec)
}

fn same_dims(a: &DimVector, b: &DimVector) -> bool {
    a.stable == b.stable && a.values.keys().chain(b.values.keys()).all(|&v| a.at(v) == b.at(v))
}

/// `(i, j)` with `dv = dim N_{i,j}` (`j = None` for `N_{i,∞}`).
pub fn dinf_params(q: &Quiver, dv: &DimVector) -> Option<(u64, Option<u64>)> {
    let at = |l: i64| q.vertex_at(l).map_or(0, |v| dv.at(v));
    if at(0) != 1 || at(1) != 1 {
        return None;
    }
    let mut l = 2;
    let mut i = 0;
    while at(l) == 2 {
        i += 1;
        l += 1;
        if i > 1_000_000 {
            return None;
        }
    }
    let infinite = dv.stable.first().copied().unwrap_or(0);
    if infinite > 1 {
        return None;
    }
    let mut j = 0;
    let far = dv.window.depths.first().copied().unwrap_or(0) as i64 + 4;
    while at(l) == 1 {
        j += 1;
        l += 1;
        if l > far {
            break;
        }
    }
    if infinite == 1 {
        return Some((i, None));
    }
    if j == 0 {
        return None;
    }
    // Nothing may follow the run.
    let rest = dv.values.iter().any(|(&v, _)| q.label_of(v).is_some_and(|x| x >= l));
    (!rest).then_some((i, Some(j)))
}

/// Outcome of the D∞ indecomposability test.
#[derive(Clone, Debug, PartialEq)]
pub enum DInfClass {
    String(StringSpec),
    N(u64, Option<u64>),
    NotIndecomposable,
}

impl DInfClass {
    pub fn name(&self, q: &Quiver) -> String {
        match self {
            DInfClass::String(s) => string_name(q, s),
            DInfClass::N(i, Some(j)) => format!("N({i},{j})"),
            DInfClass::N(i, None) => format!("N({i},inf)"),
            DInfClass::NotIndecomposable => "NotIndecomposable".into(),
        }
    }
}

/// Classifies a dimension vector on D∞ as the dimension vector of a string,
/// of `N_{i,j}` / `N_{i,∞}`, or of no indecomposable in `rep⁺`.
pub fn dinf_indec_test(q: &Quiver, dv: &DimVector) -> Result<DInfClass> {
    if q.classify()? != QuiverClass::InfDynkin(InfType::DInf) {
        return Err(Error::WrongType("needs a quiver of type D_inf".into()));
    }
    if dv.max_entry() > 2 || dv.is_zero() {
        return Ok(DInfClass::NotIndecomposable);
    }
    if let Some((i, j)) = dinf_params(q, dv) {
        if j.is_none() && !q.infinite_path_profile().has_right_infinite {
            return Ok(DInfClass::NotIndecomposable);
        }
        return Ok(DInfClass::N(i, j));
    }
    Ok(string_of_dims(q, dv).map_or(DInfClass::NotIndecomposable, DInfClass::String))
}

/// The D∞ test on a materialised representation: decomposable inputs are rejected first.
pub fn dinf_indec_test_rep(q: &Quiver, m: &WindowRep) -> Result<DInfClass> {
    if !is_indecomposable(q, m)? {
        return Ok(DInfClass::NotIndecomposable);
    }
    dinf_indec_test(q, &m.dim_vector())
}
