import sys

from . import EXIT_DATA, EXIT_OK, exit_code_for
from ..bench import emit_residual_curve, sign_changes
from ..config import section
from ..errors import DataError, EstimationError
from ..records import render_csv, write_csv

RESIDUAL_HEADER = ['xi', 'residual']


def do_residual(args, config):
    """Scan the equilibrium residual of the Rayleigh flow and report its roots."""
    try:
        quad_points = args.quad_points or section(config, "residual").get("quad_points", 2001)
        rows = emit_residual_curve(args.sigma0, args.lo, args.hi, args.step, quad_points)
    except EstimationError as e:
        print(f"Error: {e}", file=sys.stderr)
        return exit_code_for(e)

    roots = sign_changes(rows)
    if args.out:
        try:
            write_csv(args.out, RESIDUAL_HEADER, rows)
        except DataError as e:
            print(f"Error: {e}", file=sys.stderr)
            return EXIT_DATA
        print("CSV written to %s" % args.out)
        summary = sys.stdout
    else:
        sys.stdout.write(render_csv(RESIDUAL_HEADER, rows))
        summary = sys.stderr

    if roots:
        print("Sign changes at xi = " + ', '.join("%.6g" % x for x in roots), file=summary)
    else:
        print("No sign change in [%g, %g]" % (args.lo, args.hi), file=summary)
    return EXIT_OK
