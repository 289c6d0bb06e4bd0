# MIT License
# Copyright (c) 2026 BlackwellLab
# 
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
# 
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
# 
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

"""
BlackwellLab - Orquestación de Lotes
Cola asyncio de trabajos independientes (semillas × adversarios); cada
trabajo corre en un hilo con asyncio.to_thread y el número de trabajos
simultáneos lo limita system.max_concurrent_jobs.
"""


import asyncio
from typing import Any, Callable, List

from tqdm import tqdm

from src.core.logger import get_logger


Job = Callable[[], Any]


async def run_batch(jobs: List[Job], max_concurrent: int = 4, progress: bool = False,
                    description: str = "lote") -> List[Any]:
    """
    Ejecuta los trabajos y devuelve sus resultados en el orden de entrada.

    Un trabajo que falla cancela el lote y su excepción se propaga.
    """
    logger = get_logger()
    queue: asyncio.Queue = asyncio.Queue()
    for index, job in enumerate(jobs):
        queue.put_nowait((index, job))

    results: List[Any] = [None] * len(jobs)
    bar = tqdm(total=len(jobs), desc=description, disable=not progress, leave=False)

    async def worker(worker_id: int):
        while True:
            try:
                index, job = queue.get_nowait()
            except asyncio.QueueEmpty:
                return
            try:
                results[index] = await asyncio.to_thread(job)
            except Exception as e:
                logger.error(f"Trabajo {index} falló en el worker {worker_id}: {e}")
                raise
            finally:
                bar.update(1)
                queue.task_done()

    workers = max(1, min(int(max_concurrent), len(jobs)))
    try:
        await asyncio.gather(*(worker(i) for i in range(workers)))
    finally:
        bar.close()
    return results


def run_jobs(jobs: List[Job], max_concurrent: int = 4, progress: bool = False,
             description: str = "lote") -> List[Any]:
    """Punto de entrada síncrono para la CLI."""
    if not jobs:
        return []
    return asyncio.run(run_batch(jobs, max_concurrent, progress, description))
