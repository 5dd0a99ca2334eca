import math


ESTIMATOR_TITLES = {
    'subspace': 'Subspace',
    'l2': 'L2-Norm',
    'mle': 'MLE',
    'bayes': 'Bayes',
    'moment': 'Moment',
}


def format_number(value, digits=4):
    if value is None:
        return '-'
    if isinstance(value, float) and math.isnan(value):
        return 'nan'
    return f"{value:.{digits}g}"


def _title(label):
    base, _, param = label.partition('[')
    title = ESTIMATOR_TITLES.get(base, base)
    return f"{title} [{param}" if param else title


def format_campaign_table(stats, reference=None):
    """Record sizes down, estimators across, each with Variance and Mean columns.

    ``reference`` maps (estimator, K) to (variance, mean); matching cells get
    an extra 'ref' line under the measured one.
    """
    labels = []
    for s in stats:
        if s.label not in labels:
            labels.append(s.label)
    sizes = []
    for s in stats:
        if s.record_size not in sizes:
            sizes.append(s.record_size)
    cells = {(s.label, s.record_size): s for s in stats}

    col = 22
    lines = []
    lines.append("%-6s" % 'K' + ''.join("%-*s" % (col, _title(lab)) for lab in labels))
    lines.append("%-6s" % '' + ''.join("%-11s%-11s" % ('Variance', 'Mean') for _ in labels))

    for k in sizes:
        row = "%-6d" % k
        for lab in labels:
            s = cells.get((lab, k))
            if s is None:
                row += "%-*s" % (col, '-')
                continue
            row += "%-11s%-11s" % (format_number(s.variance), format_number(s.mean))
        failures = sum(cells[(lab, k)].failures for lab in labels if (lab, k) in cells)
        if failures:
            row += "  (%d failed)" % failures
        lines.append(row.rstrip())

        if reference:
            ref_row = "%-6s" % 'ref'
            found = False
            for lab in labels:
                cell = reference.get((lab, k))
                if cell is None:
                    ref_row += "%-*s" % (col, '')
                else:
                    found = True
                    ref_row += "%-11s%-11s" % (format_number(cell[0]), format_number(cell[1]))
            if found:
                lines.append(ref_row.rstrip())

    return "\n".join(lines)


def format_sweep_table(rows, label):
    lines = ["%-8s %-12s %-12s %s" % (label, 'Mean', 'Variance', 'Failures')]
    for row in rows:
        lines.append("%-8d %-12s %-12s %d" % (
            row.value, format_number(row.mean, 6), format_number(row.variance, 6), row.failures,
        ))
    return "\n".join(lines)


def format_estimate(param_names, values, iterations=None, termination=None):
    parts = ["%s = %.6f" % (name, value) for name, value in zip(param_names, values)]
    text = "Estimate: " + ', '.join(parts)
    if iterations is not None:
        text += "\nIterations: %d" % iterations
    if termination is not None:
        text += "\nTermination: %s" % termination
    return text
