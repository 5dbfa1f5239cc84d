use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::code::Code;
use crate::dyadic::DyadicRational;
use crate::frontier::{is_left_regular, is_right_regular, FrontierError, FrontierState};
use crate::lengths::LengthVector;
use crate::word::{Word, WordForm, DEFAULT_MAX_LEN};

/// Which shape of input the construction runs under.
///
/// The seeded shapes start from a fixed short code and accept Kraft sums up
/// to 3/4; the form-split shape accepts up to 5/8 and partitions the
/// codewords by (first bit, last bit).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ConstructionCase {
    /// `k1 = 1`: the code starts as `{0}`.
    SeedZero,
    /// `k1 = 0, k2 = 2`: the code starts as `{00, 11}`.
    SeedPair,
    /// `k1 = 0, k2 <= 1`: four per-form subcodes with Kraft caps
    /// 1/4, 1/8, 1/8, 1/8.
    FormSplit,
}

impl fmt::Display for ConstructionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructionCase::SeedZero => write!(f, "seeded {{0}} (k1 = 1)"),
            ConstructionCase::SeedPair => write!(f, "seeded {{00, 11}} (k1 = 0, k2 = 2)"),
            ConstructionCase::FormSplit => write!(f, "form-split (k1 = 0, k2 <= 1)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructError {
    /// No sufficient condition applies.  This does not claim that no
    /// fix-free code exists; the exhaustive oracle can settle small cases.
    ConditionNotMet { kraft: DyadicRational, k1: u64, k2: u64 },
    LengthCapExceeded { required: usize, max_len: u8 },
    /// Demand exceeded availability at some step.  Unreachable for accepted
    /// inputs; surfacing it instead of panicking keeps the tripwire visible.
    CountingViolation { t: u8, form: Option<WordForm>, demand: u64, available: u64 },
    /// Decomposition applies only to the form-split shape.
    NotFormSplit { actual: ConstructionCase },
    Internal { detail: String },
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::ConditionNotMet { kraft, k1, k2 } => write!(
                f,
                "condition not met: Kraft sum {} with k1 = {}, k2 = {}; \
                 need k1 = 1 and sum <= 3/4, or k1 = 0 and k2 = 2 and sum <= 3/4, \
                 or k1 = 0 and k2 <= 1 and sum <= 5/8",
                kraft, k1, k2
            ),
            ConstructError::LengthCapExceeded { required, max_len } => write!(
                f,
                "length vector needs words of length {} but the cap is {}",
                required, max_len
            ),
            ConstructError::CountingViolation { t, form, demand, available } => {
                write!(f, "counting violation at step {}", t)?;
                if let Some(form) = form {
                    write!(f, " (form {})", form)?;
                }
                write!(
                    f,
                    ": demand {} exceeds availability {}; this contradicts the \
                     accepted-input guarantee and indicates a bug",
                    demand, available
                )
            }
            ConstructError::NotFormSplit { actual } => {
                write!(f, "decomposition applies only to the form-split shape, input is {}", actual)
            }
            ConstructError::Internal { detail } => write!(f, "internal invariant broken: {}", detail),
        }
    }
}

impl std::error::Error for ConstructError {}

/// Decide which construction shape covers the input.
///
/// The priority is fixed: the seeded shapes take precedence because they
/// accept the larger threshold 3/4.  Together the three shapes exhaust
/// every vector with Kraft sum at most 5/8.
pub fn dispatch(v: &LengthVector) -> Result<ConstructionCase, ConstructError> {
    let kraft = v.kraft_sum();
    let three_quarters = DyadicRational::new_u64(3, 2);
    let five_eighths = DyadicRational::new_u64(5, 3);
    let (k1, k2) = (v.count_at(1), v.count_at(2));
    if k1 == 1 && kraft <= three_quarters {
        Ok(ConstructionCase::SeedZero)
    } else if k1 == 0 && k2 == 2 && kraft <= three_quarters {
        Ok(ConstructionCase::SeedPair)
    } else if k1 == 0 && k2 <= 1 && kraft <= five_eighths {
        Ok(ConstructionCase::FormSplit)
    } else {
        Err(ConstructError::ConditionNotMet { kraft, k1, k2 })
    }
}

/// Split of a length vector into four per-form parts with Kraft caps
/// 1/4, 1/8, 1/8, 1/8 (forms 0*0, 0*1, 1*0, 1*1 in that order).
///
/// The split is the greedy fill in increasing length: each unit goes to the
/// lowest-index part with room, so a part receives words only after every
/// earlier part is saturated.  That staircase shape makes the split unique.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    parts: [LengthVector; 4],
}

impl Decomposition {
    pub fn caps() -> [DyadicRational; 4] {
        [
            DyadicRational::new_u64(1, 2),
            DyadicRational::new_u64(1, 3),
            DyadicRational::new_u64(1, 3),
            DyadicRational::new_u64(1, 3),
        ]
    }

    pub fn parts(&self) -> &[LengthVector; 4] {
        &self.parts
    }

    pub fn part(&self, form: WordForm) -> &LengthVector {
        &self.parts[form.index()]
    }
}

pub fn decompose(v: &LengthVector) -> Result<Decomposition, ConstructError> {
    match dispatch(v)? {
        ConstructionCase::FormSplit => {}
        other => return Err(ConstructError::NotFormSplit { actual: other }),
    }
    let caps = Decomposition::caps();
    let mut deltas: [DyadicRational; 4] = std::array::from_fn(|_| DyadicRational::zero());
    let mut parts: [LengthVector; 4] = Default::default();
    for t in 1..=v.max_len() {
        let mut remaining = v.count_at(t);
        for i in 0..4 {
            if remaining == 0 {
                break;
            }
            let room = caps[i].checked_sub(&deltas[i]).expect("fill never exceeds the cap");
            let slots = room.shl_pow2(t as u32).floor();
            let take = if slots >= BigUint::from(remaining) {
                remaining
            } else {
                slots.to_u64().expect("bounded by remaining")
            };
            if take > 0 {
                parts[i].add_count(t, take);
                deltas[i] += &DyadicRational::new_u64(take, t as u32);
                remaining -= take;
            }
        }
        if remaining != 0 {
            return Err(ConstructError::Internal {
                detail: format!("could not place {} words of length {}", remaining, t),
            });
        }
    }
    Ok(Decomposition { parts })
}

/// One construction step: what was demanded, what the frontier offered, and
/// what was taken.  `demands`/`availabilities` have one entry for the seeded
/// shapes and four (by form) for the form-split shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepRecord {
    pub t: u8,
    /// Fixed starting words rather than a frontier selection.
    pub seeded: bool,
    pub demands: Vec<u64>,
    pub availabilities: Vec<u64>,
    pub chosen: Vec<Word>,
    /// Sizes [pf0, pf1, sf0, sf1] after the step, at word length `t`.
    pub frontier_sizes: [usize; 4],
    /// Kraft sum of the code after the step.
    pub kraft: DyadicRational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub steps: Vec<StepRecord>,
}

impl ConstructionTrace {
    /// Line-oriented rendering, one step per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            let join = |xs: &[u64]| {
                xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            out.push_str(&format!(
                "t={} demand=[{}] avail=[{}] chosen={}{} frontier=[{},{},{},{}]\n",
                s.t,
                join(&s.demands),
                join(&s.availabilities),
                s.chosen.len(),
                if s.seeded { " seeded" } else { "" },
                s.frontier_sizes[0],
                s.frontier_sizes[1],
                s.frontier_sizes[2],
                s.frontier_sizes[3],
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub case: ConstructionCase,
    pub code: Code,
    pub trace: ConstructionTrace,
}

/// [`construct_with_max_len`] at the default length cap.
pub fn construct(v: &LengthVector) -> Result<Construction, ConstructError> {
    construct_with_max_len(v, DEFAULT_MAX_LEN)
}

/// Build a fix-free code with exactly the requested per-length counts.
///
/// Deterministic: at every step the lexicographically smallest addable
/// words are taken (any choice of the counted size works, but a fixed rule
/// makes outputs reproducible).  The seeded shapes draw from the whole
/// addable set; the form-split shape draws per form from the four
/// boundary-bit crosses.  Words picked within one step all come from the
/// frontier computed before the step; equal-length words cannot prefix or
/// suffix one another, so simultaneous selection is sound.
pub fn construct_with_max_len(
    v: &LengthVector,
    max_len: u8,
) -> Result<Construction, ConstructError> {
    let case = dispatch(v)?;
    if v.max_len() > max_len as usize {
        return Err(ConstructError::LengthCapExceeded { required: v.max_len(), max_len });
    }
    let decomposition = match case {
        ConstructionCase::FormSplit => Some(decompose(v)?),
        _ => None,
    };

    let mut builder = Builder::new(max_len);
    for t in 1..=v.max_len() {
        let t8 = t as u8;
        match case {
            ConstructionCase::SeedZero if t == 1 => {
                let available = builder.frontier.addable().len() as u64;
                let seed = vec![word(0, 1)];
                builder.apply_step(case, t8, true, vec![1], vec![available], seed)?;
            }
            ConstructionCase::SeedPair if t == 2 => {
                let available = builder.frontier.addable().len() as u64;
                let seed = vec![word(0b00, 2), word(0b11, 2)];
                builder.apply_step(case, t8, true, vec![2], vec![available], seed)?;
            }
            ConstructionCase::SeedZero | ConstructionCase::SeedPair => {
                let demand = v.count_at(t);
                let addable = builder.frontier.addable();
                let available = addable.len() as u64;
                if available < demand {
                    return Err(ConstructError::CountingViolation {
                        t: t8,
                        form: None,
                        demand,
                        available,
                    });
                }
                let chosen = addable[..demand as usize].to_vec();
                builder.apply_step(case, t8, false, vec![demand], vec![available], chosen)?;
            }
            ConstructionCase::FormSplit => {
                let decomposition = decomposition.as_ref().expect("present for form-split");
                let sets = builder.frontier.addable_by_form();
                let mut demands = Vec::with_capacity(4);
                let mut availabilities = Vec::with_capacity(4);
                let mut chosen = Vec::new();
                for (i, form) in WordForm::ALL.iter().enumerate() {
                    let demand = decomposition.parts[i].count_at(t);
                    let available = sets[i].len() as u64;
                    demands.push(demand);
                    availabilities.push(available);
                    if available < demand {
                        return Err(ConstructError::CountingViolation {
                            t: t8,
                            form: Some(*form),
                            demand,
                            available,
                        });
                    }
                    chosen.extend_from_slice(&sets[i][..demand as usize]);
                }
                builder.apply_step(case, t8, false, demands, availabilities, chosen)?;
            }
        }
    }

    Ok(Construction {
        case,
        code: builder.code,
        trace: ConstructionTrace { steps: builder.steps },
    })
}

/// Per-form ceilings on the demand a step may carry, given the running
/// Kraft sums of the lengths already placed: `2^t * (cap - delta)` with cap
/// 3/4 for the seeded shapes and the four form caps otherwise.  Used by
/// trace validation, not by selection.
pub fn step_demand_bound(case: ConstructionCase, deltas: &[DyadicRational], t: u8) -> Vec<u64> {
    match case {
        ConstructionCase::SeedZero | ConstructionCase::SeedPair => {
            assert_eq!(deltas.len(), 1, "seeded shapes track one Kraft sum");
            vec![bound_from(&DyadicRational::new_u64(3, 2), &deltas[0], t)]
        }
        ConstructionCase::FormSplit => {
            assert_eq!(deltas.len(), 4, "form-split tracks four Kraft sums");
            Decomposition::caps()
                .iter()
                .zip(deltas)
                .map(|(cap, delta)| bound_from(cap, delta, t))
                .collect()
        }
    }
}

fn bound_from(cap: &DyadicRational, delta: &DyadicRational, t: u8) -> u64 {
    match cap.checked_sub(delta) {
        Some(room) => room.shl_pow2(t as u32).floor_u64().unwrap_or(u64::MAX),
        None => 0,
    }
}

fn word(value: u32, len: u8) -> Word {
    Word::new(value, len).expect("valid word")
}

struct Builder {
    frontier: FrontierState,
    code: Code,
    kraft: DyadicRational,
    first_bit_kraft: [DyadicRational; 2],
    last_bit_kraft: [DyadicRational; 2],
    steps: Vec<StepRecord>,
}

impl Builder {
    fn new(max_len: u8) -> Self {
        Builder {
            frontier: FrontierState::with_max_len(max_len),
            code: Code::new(),
            kraft: DyadicRational::zero(),
            first_bit_kraft: std::array::from_fn(|_| DyadicRational::zero()),
            last_bit_kraft: std::array::from_fn(|_| DyadicRational::zero()),
            steps: Vec::new(),
        }
    }

    fn apply_step(
        &mut self,
        case: ConstructionCase,
        t: u8,
        seeded: bool,
        demands: Vec<u64>,
        availabilities: Vec<u64>,
        chosen: Vec<Word>,
    ) -> Result<(), ConstructError> {
        self.frontier = self.frontier.extend(&chosen).map_err(|e| match e {
            FrontierError::LengthCapExceeded { requested, max_len } => {
                ConstructError::LengthCapExceeded { required: requested as usize, max_len }
            }
            other => ConstructError::Internal { detail: other.to_string() },
        })?;
        for &w in &chosen {
            if !self.code.insert(w) {
                return Err(ConstructError::Internal {
                    detail: format!("word {} selected twice", w),
                });
            }
            let term = DyadicRational::new_u64(1, w.len() as u32);
            self.kraft += &term;
            self.first_bit_kraft[w.first_bit() as usize] += &term;
            self.last_bit_kraft[w.last_bit() as usize] += &term;
        }
        self.check_frontier_identities(t)?;
        self.check_union_regularity(case, t)?;
        self.steps.push(StepRecord {
            t,
            seeded,
            demands,
            availabilities,
            chosen,
            frontier_sizes: [
                self.frontier.pf0().len(),
                self.frontier.pf1().len(),
                self.frontier.sf0().len(),
                self.frontier.sf1().len(),
            ],
            kraft: self.kraft.clone(),
        });
        Ok(())
    }

    /// Exact size accounting: prefix-free codewords cover disjoint subtrees,
    /// so each boundary-bit component has size `2^(t-1) - delta_bit * 2^t`
    /// and the total is `2^t * (1 - delta)`.
    fn check_frontier_identities(&self, t: u8) -> Result<(), ConstructError> {
        let half = DyadicRational::new_u64(1, 1);
        let checks: [(&str, usize, &DyadicRational); 4] = [
            ("pf0", self.frontier.pf0().len(), &self.first_bit_kraft[0]),
            ("pf1", self.frontier.pf1().len(), &self.first_bit_kraft[1]),
            ("sf0", self.frontier.sf0().len(), &self.last_bit_kraft[0]),
            ("sf1", self.frontier.sf1().len(), &self.last_bit_kraft[1]),
        ];
        for (name, got, delta) in checks {
            let expected = half
                .checked_sub(delta)
                .and_then(|room| room.shl_pow2(t as u32).to_u64_exact());
            if expected != Some(got as u64) {
                return Err(ConstructError::Internal {
                    detail: format!(
                        "frontier size identity broken for {} at length {}: got {}, expected {:?}",
                        name, t, got, expected
                    ),
                });
            }
        }
        Ok(())
    }

    /// In the seeded shapes the whole prefix frontier stays right regular
    /// and the whole suffix frontier left regular from the seed onwards.
    fn check_union_regularity(&self, case: ConstructionCase, t: u8) -> Result<(), ConstructError> {
        let applies = match case {
            ConstructionCase::SeedZero => t >= 1,
            ConstructionCase::SeedPair => t >= 2,
            ConstructionCase::FormSplit => false,
        };
        if !applies {
            return Ok(());
        }
        if !is_right_regular(&self.frontier.prefix_free())
            || !is_left_regular(&self.frontier.suffix_free())
        {
            return Err(ConstructError::Internal {
                detail: format!("frontier union lost regularity at length {}", t),
            });
        }
        Ok(())
    }
}
