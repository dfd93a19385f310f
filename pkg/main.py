import argparse
import logging
import os
import sys

from src import (
    ConfigError,
    DetrameError,
    checkpoint_load,
    evaluate,
    fit,
    load_config,
    load_dataset,
    noise_sweep,
    print_suite_table,
    run_suites,
    save_noise_sweep,
    validate_config,
)

logger = logging.getLogger('detrame')


def _float_list(text):
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text):
    try:
        return [int(item) for item in text.split(',') if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def parse_arguments(argv=None):
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(description='Train and verify deep transform and metric learning networks.')
    parser.add_argument('--log-level', default='INFO', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'],
                        help='Logging level (default: INFO)')
    parser.add_argument('--quiet', action='store_true', help='Disable progress bars')
    commands = parser.add_subparsers(dest='command', required=True)

    verify = commands.add_parser('verify', help='Run the equivalence, prox and gradient self-checks')
    verify.add_argument('--quick', action='store_true', help='Fewer random instances per suite')
    verify.add_argument('--seed', type=int, default=0, help='Seed for the random instances (default: 0)')

    train = commands.add_parser('train', help='Train a network from a config file')
    train.add_argument('--config', required=True, help='Path to a key = value training config')
    train.add_argument('--resume', help='Checkpoint to continue training from')

    evaluate_cmd = commands.add_parser('eval', help='Test accuracy of a checkpoint')
    evaluate_cmd.add_argument('--checkpoint', required=True, help='Checkpoint file')
    evaluate_cmd.add_argument('--config', help='Config naming the dataset (default: the one stored in the checkpoint)')

    sweep = commands.add_parser('noise-sweep', help='Fooling rate under Gaussian noise')
    sweep.add_argument('--checkpoint', required=True, help='Checkpoint file')
    sweep.add_argument('--rhos', required=True, type=_float_list, help='Comma-separated noise levels')
    sweep.add_argument('--seeds', type=_int_list, default=[0], help='Comma-separated noise seeds (default: 0)')
    sweep.add_argument('--config', help='Config naming the dataset (default: the one stored in the checkpoint)')
    sweep.add_argument('--output', help='JSON output path (default: noise_sweep.json next to the checkpoint)')
    return parser.parse_args(argv)


def _restore(args):
    restored = checkpoint_load(args.checkpoint)
    config = load_config(args.config) if args.config else restored.config
    if config is None:
        raise ConfigError(f"{args.checkpoint} stores no config; pass --config")
    validate_config(config)
    _, test = load_dataset(config)
    return restored.net, test


def run_verify(args):
    results = run_suites(quick=args.quick, seed=args.seed, progress=not args.quiet)
    print_suite_table(results)
    return 0 if all(r.passed for r in results) else 1


def run_train(args):
    config = load_config(args.config)
    result = fit(config, resume=args.resume, progress=not args.quiet)
    if result.history:
        last = result.history[-1]
        print(f"epoch {last['epoch']}: train loss {last['train_loss']:.4f}, "
              f"train acc {last['train_acc']:.4f}, test acc {last['test_acc']:.4f}")
    print(f"Metrics saved to {result.metrics_path}")
    print(f"Checkpoint saved to {result.checkpoint_path}")
    return 0


def run_eval(args):
    net, test = _restore(args)
    result = evaluate(net, test)
    print(f"accuracy {result.accuracy:.4f} on {result.samples} samples")
    return 0


def run_noise_sweep(args):
    net, test = _restore(args)
    result = noise_sweep(net, test, args.rhos, seeds=args.seeds, progress=not args.quiet)
    output = args.output or os.path.join(os.path.dirname(args.checkpoint), 'noise_sweep.json')
    save_noise_sweep(result, output)
    for rho, rate in zip(result.rhos, result.fooling_rates):
        print(f"rho {rho:g}: fooling rate {rate:.4f}")
    print(f"Noise sweep saved to {output}")
    return 0


COMMANDS = {
    'verify': run_verify,
    'train': run_train,
    'eval': run_eval,
    'noise-sweep': run_noise_sweep,
}


def main(argv=None):
    args = parse_arguments(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 2
    except FileNotFoundError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    except DetrameError as e:
        logger.debug("command %s failed", args.command, exc_info=True)
        print(f"Error in {args.command}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
