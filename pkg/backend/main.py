import logging

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.config import get_settings
from app.routers import contact, models, words

logging.basicConfig(
    level=getattr(logging, get_settings().LOG_LEVEL.upper(), logging.INFO),
    format='%(asctime)s - %(levelname)s - %(message)s',
)

app = FastAPI(title="Planar Monodromy API")

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(words.router)
app.include_router(models.router)
app.include_router(contact.router)

@app.get("/")
async def root():
    return {"message": "Planar Monodromy Backend Operational"}

@app.get("/health")
async def health_check():
    return {"status": "healthy"}
