from concurrent.futures import ThreadPoolExecutor, as_completed


def ordered_map(func, items, workers=4, progress_callback=None):
    """Apply ``func`` to every item, possibly in parallel.

    Results come back in input order whatever the completion order, so any
    reduction over them is schedule-independent.

    Args:
        func: callable taking one item
        items: sequence of inputs
        workers: thread count; <= 1 runs sequentially
        progress_callback: called with (completed_count, total_count)
    """
    items = list(items)
    total = len(items)
    results = [None] * total

    if workers <= 1 or total <= 1:
        for idx, item in enumerate(items):
            results[idx] = func(item)
            if progress_callback:
                progress_callback(idx + 1, total)
        return results

    with ThreadPoolExecutor(max_workers=workers) as executor:
        future_to_index = {}
        for idx, item in enumerate(items):
            future = executor.submit(func, item)
            future_to_index[future] = idx

        completed = 0
        for future in as_completed(future_to_index):
            results[future_to_index[future]] = future.result()
            completed += 1
            if progress_callback:
                progress_callback(completed, total)

    return results
