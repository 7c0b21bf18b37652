"""Command-line harness: data generation, indexing, serving, training, eval."""

from __future__ import annotations

import argparse
import json
import sys

from .agents import (CrossAttentionScorer, ScorerConfig, collect_oracle_demos,
                     demo_samples, train_bc, train_rl)
from .catalog import (CatalogConfig, apply_attributes, generate_synthetic_catalog,
                      load_catalog, mine_attributes, save_catalog)
from .config import Config
from .goals import GoalConfig, generate_goals, load_goals, save_goals
from .harness import (read_records, replay_record, replay_record_to_samples,
                      run_eval, split_goals)
from .search import build_index, load_index, save_index
from .server import ServerConfig, serve_forever
from .session import Env


def _load_config(args) -> Config:
    return Config.from_file(args.config) if args.config else Config()


def _build_env(args, config: Config) -> Env:
    catalog = load_catalog(args.catalog)
    if getattr(args, "index", None):
        index = load_index(args.index)
    else:
        index = build_index(catalog, config.k1, config.b)
    goals = load_goals(args.goals) if getattr(args, "goals", None) else []
    return Env(catalog, index, goals)


def cmd_gen_catalog(args):
    config = _load_config(args)
    cat_config = CatalogConfig(
        n_products=args.n, n_categories=config.n_categories,
        max_options_per_group=config.max_options_per_group,
        price_range=config.price_range,
        attribute_embed_prob=config.attribute_embed_prob)
    catalog = generate_synthetic_catalog(cat_config, seed=args.seed)
    save_catalog(catalog, args.out)
    print(f"wrote {len(catalog)} products to {args.out}")


def cmd_mine_attrs(args):
    config = _load_config(args)
    catalog = load_catalog(args.catalog)
    stoplist = set()
    if args.stoplist:
        with open(args.stoplist, encoding="utf-8") as fh:
            stoplist = {line.strip() for line in fh if line.strip()}
    mined = mine_attributes(catalog, args.top_k or config.top_k_per_category,
                            stoplist)
    annotated = apply_attributes(catalog, mined)
    save_catalog(annotated, args.out)
    n_attrs = len(annotated.attribute_lexicon)
    print(f"mined {n_attrs} attribute phrases; wrote {args.out}")


def cmd_index(args):
    config = _load_config(args)
    catalog = load_catalog(args.catalog)
    index = build_index(catalog, config.k1, config.b)
    save_index(index, args.out)
    print(f"indexed {index.doc_count} products to {args.out}")


def cmd_gen_goals(args):
    config = _load_config(args)
    catalog = load_catalog(args.catalog)
    goal_config = GoalConfig(max_att=config.max_att, max_opt=config.max_opt,
                             price_markup_range=config.price_markup_range)
    goals = generate_goals(catalog, n=args.n, seed=args.seed, config=goal_config)
    save_goals(goals, args.out)
    print(f"wrote {len(goals)} goals to {args.out}")


def cmd_serve(args):
    config = _load_config(args)
    env = _build_env(args, config)
    server_config = ServerConfig(
        max_sessions=config.max_sessions, session_ttl=config.session_ttl,
        auth_token=args.token, static_dir=args.static, log_path=args.logs)
    serve_forever(env, server_config, args.host, args.port or config.port)


def _split_for(args, config: Config, env: Env):
    splits = split_goals(list(env.goals.values()), config.split_seed,
                         config.split_fractions)
    if args.split == "all":
        return list(env.goals.values())
    if not splits[args.split]:
        raise SystemExit(f"split {args.split!r} is empty")
    return splits[args.split]


def cmd_eval(args):
    config = _load_config(args)
    env = _build_env(args, config)
    goals = _split_for(args, config, env)
    report, _ = run_eval(
        env, args.agent, goals, episodes=args.episodes, seed=args.seed,
        horizon=args.horizon or config.horizon, checkpoint=args.checkpoint,
        log_path=args.logs)
    print(report.to_text())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"report written to {args.out}")


def cmd_train(args):
    config = _load_config(args)
    env = _build_env(args, config)
    goals = _split_for(args, config, env)
    scorer_config = ScorerConfig(dim=config.dim, vocab_size=config.vocab_size,
                                 gamma=config.gamma,
                                 max_obs_tokens=config.max_obs_tokens)
    if args.init:
        scorer = CrossAttentionScorer.load(args.init)
    else:
        scorer = CrossAttentionScorer(scorer_config, seed=args.seed)

    if args.mode == "bc":
        if args.demos:
            samples = []
            for record in read_records(args.demos):
                samples.extend(replay_record_to_samples(env, record))
        else:
            demo_goals = goals[: args.demo_goals] if args.demo_goals else goals
            samples = demo_samples(collect_oracle_demos(env, demo_goals))
        result = train_bc(scorer, samples, epochs=config.bc_epochs,
                          learning_rate=config.bc_learning_rate,
                          batch_size=config.bc_batch_size, seed=args.seed,
                          holdout_frac=config.bc_holdout_frac)
        print(f"cloned {result.n_train} samples for {config.bc_epochs} epochs; "
              f"loss {result.train_loss[0]:.3f} -> {result.train_loss[-1]:.3f}; "
              f"holdout ll {result.holdout_ll_initial:.3f} -> "
              f"{result.holdout_ll[-1]:.3f}")
    else:
        result = train_rl(scorer, env, goals, episodes=config.rl_episodes,
                          batch_size=config.rl_batch_size,
                          learning_rate=config.rl_learning_rate,
                          entropy_weight=config.entropy_weight,
                          horizon=config.horizon, seed=args.seed)
        first = sum(result.mean_rewards[:10]) / max(1, len(result.mean_rewards[:10]))
        last = sum(result.mean_rewards[-10:]) / max(1, len(result.mean_rewards[-10:]))
        print(f"{result.episodes} episodes; mean reward {first:.3f} -> {last:.3f}")
    scorer.save(args.out)
    print(f"checkpoint written to {args.out}")


def cmd_replay(args):
    config = _load_config(args)
    env = _build_env(args, config)
    records = read_records(args.log)
    failures = 0
    for record in records:
        result = replay_record(env, record)
        status = "ok" if result.ok else "MISMATCH " + "; ".join(result.mismatches)
        print(f"{record.session_id} [{record.actor}] r={result.reward} {status}")
        failures += not result.ok
    print(f"replayed {len(records)} records, {failures} mismatches")
    if failures:
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shopsim",
        description="Deterministic simulated shopping site and agent harness")
    parser.add_argument("--config", default=None,
                        help="JSON config file with defaults")
    # accepted on either side of the subcommand; SUPPRESS keeps the
    # subparser from clobbering a value parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help="JSON config file with defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-catalog", help="generate a synthetic catalog",
                       parents=[common])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_catalog)

    p = sub.add_parser("mine-attrs", help="annotate products with mined bigrams",
                   parents=[common])
    p.add_argument("--catalog", required=True)
    p.add_argument("--top-k", type=int, dest="top_k")
    p.add_argument("--stoplist", help="file with one token per line")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_mine_attrs)

    p = sub.add_parser("index", help="build and cache the search index",
                   parents=[common])
    p.add_argument("--catalog", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("gen-goals", help="sample instruction-bearing goals",
                   parents=[common])
    p.add_argument("--catalog", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_goals)

    p = sub.add_parser("serve", help="run the HTTP session service",
                   parents=[common])
    p.add_argument("--catalog", required=True)
    p.add_argument("--goals", required=True)
    p.add_argument("--index")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int)
    p.add_argument("--logs", help="trajectory log file (appended)")
    p.add_argument("--static", help="directory with the web frontend build")
    p.add_argument("--token", help="require X-Auth-Token on API calls")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("eval", help="evaluate an agent on a goal split",
                   parents=[common])
    p.add_argument("--agent", required=True, choices=["rule", "oracle", "policy"])
    p.add_argument("--catalog", required=True)
    p.add_argument("--goals", required=True)
    p.add_argument("--index")
    p.add_argument("--split", default="test",
                   choices=["train", "dev", "test", "all"])
    p.add_argument("--episodes", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--horizon", type=int)
    p.add_argument("--checkpoint", help="scorer checkpoint for --agent policy")
    p.add_argument("--logs", help="write per-episode trajectory records here")
    p.add_argument("--out", help="write the metrics report as JSON")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("train", help="train the choice policy",
                   parents=[common])
    p.add_argument("--mode", required=True, choices=["bc", "rl"])
    p.add_argument("--catalog", required=True)
    p.add_argument("--goals", required=True)
    p.add_argument("--index")
    p.add_argument("--split", default="train",
                   choices=["train", "dev", "test", "all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--demos", help="demonstration log for bc mode")
    p.add_argument("--demo-goals", type=int, dest="demo_goals",
                   help="cap the goals used for oracle demo collection")
    p.add_argument("--init", help="warm-start checkpoint")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("replay", help="verify a trajectory log replays exactly",
                   parents=[common])
    p.add_argument("log")
    p.add_argument("--catalog", required=True)
    p.add_argument("--goals", required=True)
    p.add_argument("--index")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> None:
    args = build_parser().parse_args(argv)
    args.func(args)


if __name__ == "__main__":
    main()
