# celery.py
import os

from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'icr_dmt.settings')

app = Celery('icr_dmt')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
