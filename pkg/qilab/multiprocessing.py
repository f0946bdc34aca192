"""Row-parallel evaluation of sweeps with a tqdm progress bar.

Copyright 2024 Blue Brain Project / EPFL

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
"""

import contextlib
import logging

import joblib
from joblib import Parallel, delayed
from tqdm import tqdm

logger = logging.getLogger(__name__)


@contextlib.contextmanager
def tqdm_joblib(bar):
    """Advance ``bar`` as joblib batches complete.

    joblib's batch completion callback is swapped for one that first updates the bar
    by the batch size; the original callback is restored and the bar closed on exit.

    Args:
        bar (tqdm.tqdm): the progress bar, sized to the number of work items.

    Yields:
        tqdm.tqdm: the same bar.
    """
    original = joblib.parallel.BatchCompletionCallBack

    class _ProgressCallback(original):
        def __call__(self, *args, **kwargs):
            bar.update(n=self.batch_size)
            return super().__call__(*args, **kwargs)

    joblib.parallel.BatchCompletionCallBack = _ProgressCallback
    try:
        yield bar
    finally:
        joblib.parallel.BatchCompletionCallBack = original
        bar.close()


def parallel_map(func, items, n_jobs=1, desc=None, progress=False):
    """Evaluate ``func`` on every item and return the results in input order.

    Args:
        func (callable): pure function of one item.
        items (list): the work items, typically grid points.
        n_jobs (int): joblib worker count, -1 for all cores.
        desc (str): progress bar label.
        progress (bool): show a tqdm progress bar on stderr.

    Returns:
        list: ``[func(item) for item in items]``, independent of ``n_jobs``.
    """
    items = list(items)
    logger.debug("evaluating %d items with n_jobs=%s", len(items), n_jobs)
    if n_jobs == 1:
        return [func(item) for item in tqdm(items, desc=desc, disable=not progress)]

    with tqdm_joblib(tqdm(desc=desc, total=len(items), disable=not progress)):
        return Parallel(n_jobs=n_jobs)(delayed(func)(item) for item in items)
