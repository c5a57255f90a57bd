pub mod geometry;
pub mod world;
pub mod boundary_mapper;
pub mod robot;
pub mod planner;
pub mod object_mapper;
pub mod config;
pub mod pipeline;
pub mod render;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    struct Overview;
    #[doc = include_str!("../../../book/src/worlds.md")]
    struct Worlds;
    #[doc = include_str!("../../../book/src/planning.md")]
    struct Planning;
    #[doc = include_str!("../../../book/src/mapping.md")]
    struct Mapping;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
