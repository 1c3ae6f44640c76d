# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at https://mozilla.org/MPL/2.0/.
from __future__ import annotations

import argparse
import logging
import pathlib
import sys

import argparse_subdec

from . import (
    experiments,
    linalg,
    ty,
    util,
)


logger = logging.getLogger()


EXIT_USAGE = 1
EXIT_NUMERICAL = 2

EXPERIMENT_ALIASES = {
    'interp_error': 'interpolation',
    'div_preservation': 'divergence',
    'quad_count': 'quadcount',
}


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> ty.NoReturn:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f'{self.prog}: error: {message}\n')


def _degree_range(spec: str) -> ty.List[int]:
    try:
        return util.parse_degree_range(spec)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _mesh_shape(spec: str) -> ty.List[int]:
    try:
        shape = [int(t) for t in spec.split(',')]
    except ValueError:
        shape = []
    if not 1 <= len(shape) <= 3 or any(n < 1 for n in shape):
        msg = f'invalid mesh: {spec!r}'
        raise argparse.ArgumentTypeError(msg)
    return shape


def _common_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        '--dim',
        type=int,
        choices=(1, 2, 3),
        default=2,
        help="""Spatial dimension (default: 2).""",
    )
    parser.add_argument(
        '--degree',
        type=_degree_range,
        dest='degrees',
        metavar='A..B',
        help="""Degree or inclusive degree range.""",
    )
    parser.add_argument(
        '--variant',
        type=util.split_list,
        dest='variants',
        metavar='LIST',
        help="""
        Comma separated variants, e.g. "point,integral(0..6)" or
        "equispaced,spectral".
        """,
    )
    parser.add_argument(
        '--mesh',
        type=_mesh_shape,
        metavar='NX[,NY[,NZ]]',
        help="""Boxes per axis; a single number is used for every axis.""",
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=experiments.DEFAULT_SEED,
        help=f"""Random seed (default: {experiments.DEFAULT_SEED}).""",
    )
    parser.add_argument(
        '--out',
        type=pathlib.Path,
        metavar='FILE',
        help="""
        Output CSV file. Experiments producing one table per variant write
        FILE's stem, the variant and FILE's suffix joined by dots.
        """,
    )
    parser.add_argument(
        '--quad-tables',
        type=pathlib.Path,
        metavar='DIR',
        help="""Directory of tabulated quadrature rules.""",
    )
    parser.add_argument(
        '--deep',
        action='store_true',
        help="""Include the most expensive refinement level.""",
    )
    parser.add_argument(
        '--element',
        choices=('lagrange', 'dg', 'rt', 'bdm', 'n1', 'n2'),
        help="""Element family.""",
    )
    parser.add_argument(
        '--cache-dir',
        type=pathlib.Path,
        metavar='DIR',
        help="""Cache built elements in DIR.""",
    )
    parser.add_argument(
        '-v', '--verbose',
        action='count',
        default=0,
        help="""Log more; repeat for debug output.""",
    )
    return parser


COMMON = _common_parser()


class CLI:
    SD = argparse_subdec.SubDec(name_prefix='__cmd_', fn_dest='core_fn')

    def __init__(self) -> None:
        self.__init_parser()

    def run(self, argv: ty.Optional[ty.Sequence[str]] = None) -> int:
        try:
            self.__args = self.__parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)

        if not self.__args.core_subcommand:
            self.__parser.print_usage(sys.stderr)
            return EXIT_USAGE

        self.__setup_logging()
        try:
            self.__args.core_fn(self)
        except linalg.NumericalError as e:
            print(f'yafet: numerical failure: {e}', file=sys.stderr)
            return EXIT_NUMERICAL
        except (ValueError, OSError) as e:
            print(f'yafet: error: {e}', file=sys.stderr)
            return EXIT_USAGE
        return 0

    def __init_parser(self) -> None:
        self.__parser = ArgumentParser(
            prog='yafet',
            description="""
            Finite element tabulation experiments. The experiment can also be
            selected with --experiment NAME.
            """,
        )

        self.__subparsers = self.__parser.add_subparsers(
            title='subcommands',
            dest='core_subcommand',
        )

        CLI.SD.create_parsers(self.__subparsers)

    def __parse_args(self,
                     argv: ty.Optional[ty.Sequence[str]],
                     ) -> argparse.Namespace:
        if argv is None:
            argv = sys.argv[1:]
        argv = _hoist_experiment(list(argv))
        return self.__parser.parse_args(argv)

    def __setup_logging(self) -> None:
        level = logging.WARNING
        if self.__args.verbose == 1:
            level = logging.INFO
        elif self.__args.verbose > 1:
            level = logging.DEBUG
        logging.basicConfig(level=level, format='%(levelname)s: %(message)s')

    def __config(self, experiment: str) -> experiments.ExperimentConfig:
        a = self.__args
        return experiments.ExperimentConfig(
            experiment=experiment,
            dim=a.dim,
            degrees=a.degrees,
            variants=a.variants,
            mesh=a.mesh,
            seed=a.seed,
            out=a.out,
            quad_tables=a.quad_tables,
            deep=a.deep,
            element=a.element,
            cache_dir=a.cache_dir,
        )

    def __run_experiment(self, experiment: str) -> None:
        config = self.__config(experiment)
        tables = experiments.run(config)
        write_tables(tables, config.out)

    # SUBCOMMANDS
    # ===========
    # The rest of this class contains definitions of subcommands.

    @SD.cmd(
        parents=[COMMON],
        description="""
        Condition number of the Lagrange Vandermonde matrix and forward and
        backward errors of solving with its transpose. Columns:
        deg,kappa,forward,backward; one table per node variant.
        """,
    )
    def __cmd_conditioning(self) -> None:
        self.__run_experiment('conditioning')

    @SD.cmd(
        parents=[COMMON],
        description="""
        Maximum error of interpolating the Runge function on the biunit
        simplex mesh. Columns: deg,equispaced,spectral.
        """,
    )
    def __cmd_interpolation(self) -> None:
        self.__run_experiment('interpolation')

    @SD.cmd(
        parents=[COMMON],
        description="""
        L2 norm of the divergence of the interpolant of a divergence free
        field on a tetrahedral box mesh (default 2x2x2 boxes; use --mesh 8
        for 8x8x8). Columns: variant,divnorm.
        """,
    )
    def __cmd_divergence(self) -> None:
        self.__run_experiment('divergence')

    @SD.cmd(
        parents=[COMMON],
        description="""
        Interpolation errors and observed orders under uniform refinement.
        Columns: ref,l2,l2order,hdiv,hdivorder (hcurl for Nedelec
        elements); one table per variant.
        """,
    )
    def __cmd_convergence(self) -> None:
        self.__run_experiment('convergence')

    @SD.cmd(
        parents=[COMMON],
        description="""
        Number of points of the Stroud rule and of the smallest tabulated
        rule per degree. Columns: deg,stroud,tabulated.
        """,
    )
    def __cmd_quadcount(self) -> None:
        self.__run_experiment('quadcount')

    @SD.cmd(
        parents=[COMMON],
        description="""
        Orthogonality residual of the fast-diagonalization basis and nonzeros
        of the 2D stiffness matrix.
        Columns: p,eqn16_residual,nnz2d,dim2d.
        """,
    )
    def __cmd_fdm(self) -> None:
        self.__run_experiment('fdm')

    @SD.cmd(
        parents=[COMMON],
        description="""
        Print nodal basis values, one row per point. Points default to the
        element's own DOF points.
        """,
    )
    @SD.add_argument(
        '--points',
        type=pathlib.Path,
        dest='tabulate_points',
        metavar='FILE',
        help="""File with one point per line.""",
    )
    def __cmd_tabulate(self) -> None:
        config = self.__config('tabulate')
        points = None
        path = self.__args.tabulate_points
        if path is not None:
            with open(path) as f:
                points = experiments.read_points(f, config.dim)
        with config:
            tables = experiments.tabulate(config, points)
        write_tables(tables, config.out)

    @SD.cmd(
        parents=[COMMON],
        description="""
        Wall-clock time to build an element and to tabulate it. Columns:
        deg,tinit,teval.
        """,
    )
    def __cmd_timing(self) -> None:
        self.__run_experiment('timing')

    @SD.cmd(
        parents=[COMMON],
        description="""
        DOF counts per entity and the Vandermonde condition number of one
        element.
        """,
    )
    def __cmd_inspect(self) -> None:
        self.__run_experiment('inspect')


def _hoist_experiment(argv: ty.List[str]) -> ty.List[str]:
    """
    Turn ``--experiment NAME`` anywhere in ``argv`` into the subcommand.
    """
    for i, arg in enumerate(argv):
        if arg == '--experiment':
            if i + 1 >= len(argv):
                return argv
            name = EXPERIMENT_ALIASES.get(argv[i + 1], argv[i + 1])
            return [name] + argv[:i] + argv[i + 2:]
        if arg.startswith('--experiment='):
            name = arg.split('=', 1)[1]
            name = EXPERIMENT_ALIASES.get(name, name)
            return [name] + argv[:i] + argv[i + 1:]
    return argv


def _labelled_path(out: pathlib.Path, label: str) -> pathlib.Path:
    return out.with_name(f'{out.stem}.{label}{out.suffix}')


def write_tables(tables: experiments.Tables,
                 out: ty.Union[str, pathlib.Path, None],
                 ) -> None:
    labelled = len(tables) > 1
    if out is None:
        for label, table in tables.items():
            if labelled:
                sys.stdout.write(f'# {label}\n')
            experiments.write_csv(table, sys.stdout)
        return
    out = pathlib.Path(out)
    for label, table in tables.items():
        path = _labelled_path(out, label) if labelled else out
        with open(path, 'w', newline='') as f:
            experiments.write_csv(table, f)
        logger.info(f'wrote {path}')


def run(argv: ty.Optional[ty.Sequence[str]] = None) -> int:
    return CLI().run(argv)
