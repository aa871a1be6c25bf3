"""
Скрипт для расчета индекса Граовца-Пизанского (GP), индекса Винера и
группы автоморфизмов молекулярных графов, а также для QSPR-регрессий
температуры плавления по этим дескрипторам.

Использование:
    python gpindex.py compute data/graphs/octane_isomer/2-methyl-3-ethyl-pentane.graph --orbits
    python gpindex.py verify
    python gpindex.py fit --family alkane --model log
    python gpindex.py predict 273 --family alkane --model log
    python gpindex.py report table2 --format csv --output table2.csv

Коды возврата:
    0 - успех
    1 - проверка не пройдена (несовпадение с опубликованными значениями)
    2 - ошибка использования, формата файла или входных данных регрессии
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from bundle import BundleError, MoleculeBundle, parse_family
from config import configure_logging
from loader import GraphFormatError, TableFormatError, load_graph_file
from molgraph import (
    ConsistencyError,
    GraphError,
    Permutation,
    automorphisms,
    automorphisms_bruteforce,
    descriptor_record,
    distance_matrix,
    format_gp,
    hand_automorphisms,
)
from qspr import (
    REPORT_IDS,
    ModelKind,
    RegressionError,
    RegressionFit,
    UnknownReportError,
    build_report,
    fit_family,
    matching_variants,
    predict,
    published_r_squared_variants,
)

logger = logging.getLogger("gpindex")

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

MODEL_KINDS = {
    "log": ModelKind.LOG_SINGLE,
    "linear": ModelKind.LINEAR_SINGLE,
    "multilinear": ModelKind.MULTILINEAR,
}


class UsageError(ValueError):
    """Несовместимые аргументы командной строки."""


def emit(args: argparse.Namespace, text: str) -> None:
    """Печатает результат или пишет его в файл --output."""
    if args.output:
        path = Path(args.output)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
        print(f"💾 Результат сохранен: {path}")
    else:
        sys.stdout.write(text)


def as_json(data) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2) + "\n"


def make_bundle(args: argparse.Namespace) -> MoleculeBundle:
    return MoleculeBundle(data_directory=args.data_dir, workers=args.workers)


def format_number(value: float, decimals: int = 4) -> str:
    return f"{value:.{decimals}f}"


def format_equation(fit: RegressionFit) -> str:
    """MP = 34.1960 ln(gp) + 68.5750 и т.п."""
    c = fit.coefficients
    if fit.model_kind == ModelKind.MULTILINEAR:
        terms = [format_number(c[0])]
        for coefficient, name in zip(c[1:], fit.predictor_names):
            sign = "-" if coefficient < 0 else "+"
            terms.append(f"{sign} {format_number(abs(coefficient))} {name}")
        return "MP = " + " ".join(terms)

    predictor = fit.predictor_names[0] if fit.predictor_names else "x"
    term = f"ln({predictor})" if fit.model_kind == ModelKind.LOG_SINGLE else predictor
    sign = "-" if c[1] < 0 else "+"
    return f"MP = {format_number(c[0])} {term} {sign} {format_number(abs(c[1]))}"


def cmd_compute(args: argparse.Namespace) -> int:
    """Дескрипторы одного графа из файла."""
    graph = load_graph_file(args.graph)

    if args.generators:
        generators = [Permutation.from_cycles(graph.vertex_count, text) for text in args.generators]
        aut = hand_automorphisms(graph, generators)
    elif args.bruteforce:
        aut = automorphisms_bruteforce(graph)
    else:
        aut = automorphisms(graph, distance_matrix(graph))

    record = descriptor_record(graph, aut=aut)

    if args.json:
        data = record.to_dict()
        if args.automorphisms:
            data["automorphisms"] = [p.cycle_notation() for p in aut]
        emit(args, as_json(data))
        return EXIT_OK

    lines = [
        f"📄 {record.name}: вершин {record.vertex_count}, ребер {graph.edge_count}",
        f"GP={format_gp(record.gp)} |Aut|={record.aut_order} W={record.wiener} orbits={record.orbit_count}",
    ]
    if args.orbits:
        lines.append("Орбиты:")
        lines.extend("  {" + ", ".join(str(v) for v in orbit) + "}" for orbit in record.orbits)
    if args.automorphisms:
        lines.append("Автоморфизмы:")
        lines.extend(f"  {p.cycle_notation()}" for p in aut)
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    """Сверка набора молекул с опубликованными значениями."""
    bundle = make_bundle(args)
    report = bundle.verify(args.family)

    if args.json:
        emit(args, as_json(report.to_dict()))
        return EXIT_OK if report.ok else EXIT_VERIFY_FAILED

    lines = [
        "=" * 60,
        "🔍 ПРОВЕРКА НАБОРА МОЛЕКУЛ",
        "=" * 60,
        ("✅ " if report.ok else "❌ ") + report.summary_line(),
    ]
    for check in report.failures():
        reason = check.error or "; ".join(check.mismatches)
        lines.append(f"   ❌ {check.family.value}/{check.name}: {reason}")

    corrected = report.errata_applied()
    if corrected:
        lines.append("")
        lines.append("⚠️  Исправленные опечатки в опубликованных значениях:")
        for check in corrected:
            lines.extend(f"   {check.name}: {note}" for note in check.errata)

    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if report.ok else EXIT_VERIFY_FAILED


def cmd_fit(args: argparse.Namespace) -> int:
    """
    Подгонка модели на семействе из набора.

    Для моделей с напечатанным R^2 без указания выборки (алканы log,
    изомеры октана по #Aut) дополнительно печатаются R^2 по вариантам
    выборки и тот вариант, который совпадает с напечатанным значением.
    """
    family = parse_family(args.family)
    bundle = make_bundle(args)
    fit = fit_family(
        family, args.model, split=args.split, x=args.x,
        source=args.descriptors, bundle=bundle, exclude=args.exclude or (),
    )

    variants = None
    if args.split is None and not args.exclude:
        variants = published_r_squared_variants(family, args.model, args.x, args.descriptors, bundle)

    if args.json:
        data = fit.to_dict()
        data.update({"family": family.value, "descriptors": args.descriptors})
        if args.exclude:
            data["excluded"] = list(args.exclude)
        if variants:
            target, values = variants
            data["r_squared_variants"] = values
            data["published_r_squared"] = target
            data["matching_variants"] = matching_variants(values, target)
        emit(args, as_json(data))
        return EXIT_OK

    lines = [
        f"📈 {family.value} / {args.model}: {fit.observations} молекул, дескрипторы: {args.descriptors}",
        format_equation(fit),
        f"R2 = {format_number(fit.r_squared)}",
        f"multiple R = {format_number(fit.multiple_r)}",
        f"adjusted R2 = {format_number(fit.adjusted_r_squared)}",
        f"standard error = {format_number(fit.standard_error, 3)}",
    ]
    if args.exclude:
        lines.append(f"без молекул: {', '.join(args.exclude)}")
    if variants:
        target, values = variants
        matched = matching_variants(values, target)
        lines.append("R2 по выборкам: " + ", ".join(f"{k} {format_number(v)}" for k, v in values.items()))
        lines.append(f"совпадает с опубликованным {target}: {', '.join(matched) if matched else 'ни одна'}")
    emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_predict(args: argparse.Namespace) -> int:
    """Предсказание MP по заданным коэффициентам или по модели, подогнанной на наборе."""
    if args.model is None:
        raise UsageError("укажите --model (log, linear или multilinear)")

    if args.coefficients:
        fit = RegressionFit.from_coefficients(MODEL_KINDS[args.model], args.coefficients)
    else:
        if args.family is None:
            raise UsageError("укажите --family для подгонки модели или --coefficients")
        fit = fit_family(
            parse_family(args.family), args.model, split=args.split, x=args.x,
            source=args.descriptors, bundle=make_bundle(args), exclude=args.exclude or (),
        )

    value = predict(fit, args.values)

    if args.json:
        emit(args, as_json({
            "model_kind": fit.model_kind.value,
            "coefficients": list(fit.coefficients),
            "predictors": list(args.values),
            "predicted": round(value, 3),
        }))
    else:
        emit(args, f"{format_equation(fit)}\nMP-hat = {value:.3f}\n")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    """Воспроизведение таблицы по идентификатору."""
    table = build_report(args.table_id, bundle=make_bundle(args), source=args.descriptors)

    if args.json:
        emit(args, as_json(table.to_dict()))
    elif args.format == "csv":
        emit(args, table.to_csv())
    else:
        emit(args, table.to_text())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--json', action='store_true', help='Вывод в формате JSON')
    common.add_argument('--output', '-o', type=str, help='Записать результат в файл')
    common.add_argument('--data-dir', type=str, help='Директория набора молекул (по умолчанию из настроек)')
    common.add_argument('--workers', type=int, help='Число потоков для расчета дескрипторов')
    common.add_argument('--verbose', '-v', action='store_true', help='Подробное логирование')

    descriptors = argparse.ArgumentParser(add_help=False)
    descriptors.add_argument(
        '--descriptors',
        choices=['published', 'computed'],
        default='published',
        help='Дескрипторы для регрессии: как напечатаны (по умолчанию) или вычисленные'
    )

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument('--family', choices=['alkane', 'pah', 'octane_isomer'], help='Семейство молекул')
    model.add_argument('--model', choices=list(MODEL_KINDS), help='Вид модели')
    model.add_argument('--split', choices=['train', 'test', 'all'],
                       help='Выборка (по умолчанию train; для multilinear - all)')
    model.add_argument('--x', choices=['gp', 'wiener', 'aut'], default='gp',
                       help='Предиктор парной модели (по умолчанию: gp)')
    model.add_argument('--exclude', nargs='+', metavar='NAME',
                       help='Исключить молекулы из подгонки, например octane')

    parser = argparse.ArgumentParser(
        description="Индекс Граовца-Пизанского, автоморфизмы и QSPR-регрессии температуры плавления",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Примеры использования:
  python gpindex.py compute molecule.graph --orbits
  python gpindex.py verify --family pah
  python gpindex.py fit --family pah --model multilinear
  python gpindex.py fit --family octane_isomer --model linear --x aut
  python gpindex.py fit --family octane_isomer --model linear --x aut --exclude octane
  python gpindex.py predict 336 --family pah --model linear
  python gpindex.py predict 64 --model log --coefficients 34.196 68.575
  python gpindex.py report table3 --format csv
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    compute = sub.add_parser('compute', parents=[common], help='Дескрипторы графа из файла')
    compute.add_argument('graph', help='Файл графа (список ребер)')
    compute.add_argument('--orbits', action='store_true', help='Показать орбиты вершин')
    compute.add_argument('--automorphisms', action='store_true', help='Показать автоморфизмы в циклической записи')
    group = compute.add_mutually_exclusive_group()
    group.add_argument('--bruteforce', action='store_true',
                       help='Перебор всех перестановок (не больше 10 вершин)')
    group.add_argument('--generators', nargs='+', metavar='CYCLES',
                       help='Образующие группы вручную, например "(1 6)(4 7)(5 8)"')
    compute.set_defaults(handler=cmd_compute)

    verify = sub.add_parser('verify', parents=[common], help='Сверка набора с опубликованными значениями')
    verify.add_argument('--family', choices=['alkane', 'pah', 'octane_isomer'], help='Только одно семейство')
    verify.set_defaults(handler=cmd_verify)

    fit = sub.add_parser('fit', parents=[common, model, descriptors], help='Подгонка модели')
    fit.set_defaults(handler=cmd_fit)

    predict_parser = sub.add_parser('predict', parents=[common, model, descriptors], help='Предсказание MP')
    predict_parser.add_argument('values', nargs='+', type=float, help='Значения предикторов')
    predict_parser.add_argument('--coefficients', nargs='+', type=float,
                                help='Коэффициенты модели вместо подгонки на наборе')
    predict_parser.set_defaults(handler=cmd_predict)

    report = sub.add_parser('report', parents=[common, descriptors], help='Воспроизвести таблицу')
    report.add_argument('table_id', help=f"Таблица: {', '.join(REPORT_IDS)}")
    report.add_argument('--format', choices=['text', 'csv'], default='text', help='Формат вывода')
    report.set_defaults(handler=cmd_report)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Основная функция скрипта; возвращает код возврата."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command == 'fit' and (args.family is None or args.model is None):
        print("❌ Ошибка: для fit нужны --family и --model", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(args.verbose)
    logger.debug("Команда: %s", args.command)

    try:
        return args.handler(args)
    except ConsistencyError as e:
        print(f"❌ Внутреннее несоответствие: {e}", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    except FileNotFoundError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_USAGE
    except GraphFormatError as e:
        print(f"❌ Ошибка формата: {e}", file=sys.stderr)
        return EXIT_USAGE
    except GraphError as e:
        print(f"❌ Некорректный граф: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (RegressionError, UnknownReportError, BundleError, TableFormatError, UsageError) as e:
        print(f"❌ Ошибка: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"❌ Некорректные данные: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
