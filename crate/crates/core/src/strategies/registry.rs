//! Strategy lookup by name.

use super::baseline::{GreedyClient, RandomClient, RandomWaiter};
use super::clique::{CliqueWaiter, StageIPolicy};
use super::min_degree::MinDegreeWaiter;
use super::potential::PotentialClient;
use super::trees::{TreeDenseWaiter, TreeSparseWaiter};
use super::triangle::TriangleWaiter;
use super::{Client, StrategyError, Waiter};
use crate::engine::{SetFamily, WinningFamily};
use crate::graph::Board;

pub const WAITERS: &[&str] = &["min-degree-waiter", "tree-dense", "tree-sparse", "triangle", "clique:k,i", "random"];
pub const CLIENTS: &[&str] = &["potential-client", "greedy-client", "random"];

/// Everything a strategy may need to be built for one game.
#[derive(Clone, Debug)]
pub struct StrategyContext<'a> {
    pub board: &'a Board,
    pub family: &'a WinningFamily,
    pub b: u64,
    /// Explicit bad family for the degree-minimizing Waiter.
    pub bad_family: Option<&'a SetFamily>,
}

fn need_complete(board: &Board, name: &str) -> Result<usize, StrategyError> {
    if !board.is_complete() {
        return Err(StrategyError::new(format!("{name} needs a complete board")));
    }
    Ok(board.vertex_count())
}

fn need_pattern<'a>(ctx: &'a StrategyContext, name: &str) -> Result<&'a crate::graph::Pattern, StrategyError> {
    ctx.family.pattern().ok_or_else(|| StrategyError::new(format!("{name} needs a pattern family")))
}

/// Parses `clique:k,i` with an optional third field naming the Stage I policy.
fn parse_clique(spec: &str) -> Result<(usize, usize, Option<String>), StrategyError> {
    let bad = || StrategyError::new(format!("expected clique:k,i[,random|completion], got {spec:?}"));
    let fields: Vec<&str> = spec.split(',').map(str::trim).collect();
    if fields.len() < 2 || fields.len() > 3 {
        return Err(bad());
    }
    let k = fields[0].parse().map_err(|_| bad())?;
    let i = fields[1].parse().map_err(|_| bad())?;
    Ok((k, i, fields.get(2).map(|s| s.to_string())))
}

pub fn make_waiter(name: &str, ctx: &StrategyContext) -> Result<Box<dyn Waiter>, StrategyError> {
    let board = ctx.board;
    Ok(match name {
        "random" => Box::new(RandomWaiter),
        "min-degree-waiter" => {
            let fam = ctx.bad_family.ok_or_else(|| StrategyError::new("min-degree-waiter needs an explicit bad family"))?;
            Box::new(MinDegreeWaiter::new(fam.clone(), board.element_count()))
        }
        "tree-dense" => {
            let n = need_complete(board, name)?;
            Box::new(TreeDenseWaiter::new(need_pattern(ctx, name)?, n, ctx.b)?)
        }
        "tree-sparse" => {
            let n = need_complete(board, name)?;
            Box::new(TreeSparseWaiter::new(need_pattern(ctx, name)?, n, ctx.b)?)
        }
        "triangle" => {
            let s = board.part_size().ok_or_else(|| StrategyError::new("triangle needs a blow-up board"))?;
            Box::new(TriangleWaiter::new(s, ctx.b))
        }
        _ => match name.strip_prefix("clique:") {
            Some(spec) => {
                let (k, i, policy) = parse_clique(spec)?;
                let s = board.part_size().ok_or_else(|| StrategyError::new("clique needs a blow-up board"))?;
                let policy = match policy.as_deref() {
                    None | Some("completion") => StageIPolicy::CopyCompletion,
                    Some("random") => StageIPolicy::Random,
                    Some("min-degree") => StageIPolicy::MinDegree(
                        ctx.bad_family.ok_or_else(|| StrategyError::new("min-degree stage needs an explicit bad family"))?.clone(),
                    ),
                    Some(other) => return Err(StrategyError::new(format!("unknown Stage I policy {other:?}"))),
                };
                Box::new(CliqueWaiter::new(k, i, s, ctx.b, policy)?)
            }
            None => return Err(StrategyError::new(format!("unknown waiter {name:?}"))),
        },
    })
}

pub fn make_client(name: &str, ctx: &StrategyContext) -> Result<Box<dyn Client>, StrategyError> {
    Ok(match name {
        "random" => Box::new(RandomClient),
        "potential-client" => Box::new(PotentialClient::for_family(ctx.family, ctx.b)?),
        "greedy-client" => {
            let h = need_pattern(ctx, name)?;
            Box::new(GreedyClient::new(h, ctx.family.is_canonical()))
        }
        _ => return Err(StrategyError::new(format!("unknown client {name:?}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Pattern;

    #[test]
    fn names_resolve() {
        let board = Board::complete(512).unwrap();
        let fam = WinningFamily::copies(Pattern::path(3));
        let ctx = StrategyContext { board: &board, family: &fam, b: 1, bad_family: None };
        assert_eq!(make_waiter("tree-dense", &ctx).unwrap().name(), "tree-dense");
        assert_eq!(make_waiter("random", &ctx).unwrap().name(), "random");
        for c in CLIENTS {
            assert_eq!(make_client(c, &ctx).unwrap().name(), *c);
        }
        assert!(make_waiter("min-degree-waiter", &ctx).is_err());
        assert!(make_waiter("triangle", &ctx).is_err());
        assert!(make_waiter("nope", &ctx).is_err());
    }

    #[test]
    fn clique_specs() {
        let board = Board::blowup(&Pattern::complete(4), 5).unwrap();
        let fam = WinningFamily::canonical(Pattern::complete(4));
        let ctx = StrategyContext { board: &board, family: &fam, b: 1, bad_family: None };
        assert_eq!(make_waiter("clique:4,1", &ctx).unwrap().name(), "clique:4,1");
        assert!(make_waiter("clique:4,2,random", &ctx).is_ok());
        assert!(make_waiter("clique:4", &ctx).is_err());
        assert!(make_waiter("clique:4,3", &ctx).is_err());
        assert!(make_waiter("clique:4,1,bogus", &ctx).is_err());
    }
}
